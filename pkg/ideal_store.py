import json
import os

from colorama import Fore

from cone_cert import GeneratedCone, SearchCaps, certify_membership, verify_certificate
from json_codec import decode_certificate, decode_poly, encode_certificate, encode_poly
from order_ideal import NotPositiveError, OrderIdealGen
from utils import agent_print


def save_order_ideal(path, ideal: OrderIdealGen):
    """Write the generators of an order ideal with their certificates"""
    agent_print("Ideal Store", f"Saving order ideal with {len(ideal.generators)} generators...", Fore.YELLOW)
    record = {
        "generators": [encode_poly(t, ideal.cone.variables) for t in ideal.generators],
        "certificates": [encode_certificate(c) for c in ideal.certificates],
    }
    with open(path, 'w') as f:
        json.dump(record, f, indent=2)
    agent_print("Ideal Store", f"Order ideal written: {path}", Fore.YELLOW)
    return record


def load_order_ideal(path, cone: GeneratedCone, caps: SearchCaps = None) -> OrderIdealGen:
    """Read an order ideal back; missing or stale certificates are searched again"""
    agent_print("Ideal Store", f"Loading order ideal from {path}...", Fore.YELLOW)
    with open(path, 'r') as f:
        record = json.load(f)

    generators = [decode_poly(g) for g in record["generators"]]
    stored = [decode_certificate(c) for c in record.get("certificates", [])]

    certificates = []
    for i, t in enumerate(generators):
        cert = stored[i] if i < len(stored) else None
        if cert is None or not verify_certificate(t, cert, cone):
            agent_print("Ideal Store", f"Re-certifying generator {t}...", Fore.YELLOW)
            verdict = certify_membership(t, cone, caps=caps)
            if verdict.kind != "member":
                raise NotPositiveError(t, verdict)
            cert = verdict.certificate
        certificates.append(cert)

    ideal = OrderIdealGen(tuple(generators), tuple(certificates), cone)
    if len(certificates) != len(stored) or any(a != b for a, b in zip(certificates, stored)):
        save_order_ideal(path, ideal)
    return ideal


def ideal_store_exists(path) -> bool:
    return os.path.exists(path)
