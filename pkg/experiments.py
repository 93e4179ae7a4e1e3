import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Union

import pandas as pd
from colorama import Fore
from tabulate import tabulate

from cone_cert import SearchCaps, enumerate_products
from config import ENABLE_LEMMA2_PIPELINE, SWEEP_CONFIG
from multipoly import SparsePoly
from order_ideal import NotOrderUnitError, Positive, lemma2_positivity
from ring_setting import ConeSetting, RingSetting, SettingError, get_setting
from utils import agent_print, get_logger

logger = get_logger("experiments")

PASS = "PASS"
FAIL_REFUTED = "FAIL_REFUTED"
INCONCLUSIVE = "INCONCLUSIVE"
ERROR = "ERROR"
NOT_APPLICABLE = "NOT_APPLICABLE"


@dataclass
class ExperimentReport:
    setting: str
    u: str
    a: str
    order_unit: str = ""
    order_unit_detail: str = ""
    product: str = ""
    product_degree: Optional[int] = None
    target: str = ""
    target_degree: Optional[int] = None
    target_detail: str = ""
    lemma2: str = ""
    verified: bool = True
    seconds: float = 0.0
    conclusion: str = INCONCLUSIVE
    error: str = ""
    caps: SearchCaps = field(default_factory=SearchCaps)

    def as_row(self) -> dict:
        return {
            "setting": self.setting,
            "u": self.u,
            "a": self.a,
            "order_unit": self.order_unit,
            "product": self.product,
            "product_degree": self.product_degree,
            "target": self.target,
            "target_degree": self.target_degree,
            "lemma2": self.lemma2,
            "verified": self.verified,
            "seconds": round(self.seconds, 3),
            "conclusion": self.conclusion,
        }

    def table(self) -> str:
        rows = [
            ["order unit", self.order_unit, self.order_unit_detail],
            ["u·a", self.product, "" if self.product_degree is None else f"degree {self.product_degree}"],
            ["a", self.target, self.target_detail],
        ]
        if self.lemma2:
            rows.append(["order-unit pipeline", self.lemma2, ""])
        rows.append(["conclusion", self.conclusion, self.error])
        return tabulate(rows, headers=["stage", "verdict", "detail"])


def _degree(verdict) -> Optional[int]:
    return getattr(verdict, "degree", None) if verdict.kind == "member" else None


def _detail(verdict) -> str:
    if verdict.kind == "member" and hasattr(verdict, "degree"):
        return f"certificate of degree {verdict.degree}"
    if verdict.kind == "refuted" and hasattr(verdict, "rule"):
        points = " / ".join("(" + ", ".join(str(v) for v in p) + ")" for p in verdict.witness)
        return f"{verdict.rule} at {points}"
    if verdict.kind == "refuted":
        return f"exact decision in {verdict.ring}"
    if verdict.kind == "not-found":
        return f"no certificate up to degree {verdict.degree}"
    return ""


def run_cancellation_experiment(
    setting: Union[str, RingSetting],
    u: SparsePoly,
    a: SparsePoly,
    caps: Optional[SearchCaps] = None,
    lemma2: Optional[bool] = None,
    verbose: bool = True,
) -> ExperimentReport:
    """Does u·a ≥ 0 force a ≥ 0 here? Certify u·a, then certify or refute a."""
    caps = caps or SearchCaps.from_config()
    lemma2 = ENABLE_LEMMA2_PIPELINE if lemma2 is None else lemma2
    if isinstance(setting, str):
        setting = get_setting(setting)
    variables = setting.variables
    report = ExperimentReport(setting.name, u.format(variables), a.format(variables), caps=caps)
    started = time.perf_counter()

    def say(agent, message, color):
        if verbose:
            agent_print(agent, message, color)

    say("Order Unit", f"Checking that {report.u} is an order unit in {setting.name}...", Fore.CYAN)
    unit = setting.order_unit(u, caps)
    report.order_unit = unit.verdict
    if hasattr(unit, "margin"):
        report.order_unit_detail = f"{report.u} ≥ {unit.margin}"
        report.verified &= setting.verify(u, unit)
    elif hasattr(unit, "witness"):
        report.order_unit_detail = "vanishes or is negative at (" + ", ".join(str(v) for v in unit.witness) + ")"
    if not setting.is_unit(unit):
        report.conclusion = ERROR
        report.error = f"{report.u} is not a confirmed order unit"
        report.seconds = time.perf_counter() - started
        say("Error Handler", report.error, Fore.RED)
        return report

    say("Certifier", f"Certifying u·a = {(u * a).format(variables)}...", Fore.BLUE)
    product = setting.membership(u * a, caps)
    report.product = product.kind
    report.product_degree = _degree(product)
    report.verified &= not setting.is_member(product) or setting.verify(u * a, product)

    say("Certifier", f"Deciding a = {report.a}...", Fore.BLUE)
    target = setting.membership(a, caps)
    report.target = target.kind
    report.target_degree = _degree(target)
    report.target_detail = _detail(target)
    if target.kind in ("member", "refuted"):
        report.verified &= setting.verify(a, target)

    if lemma2 and isinstance(setting, ConeSetting):
        try:
            outcome = lemma2_positivity(u, a, setting.cone, caps)
            report.lemma2 = "positive" if isinstance(outcome, Positive) else f"stalled at {outcome.stage}"
        except NotOrderUnitError as e:
            report.lemma2 = str(e)

    if not report.verified:
        report.conclusion = INCONCLUSIVE
        report.error = "a certificate or witness failed to re-verify"
    elif setting.is_member(product) and setting.is_member(target):
        report.conclusion = PASS
    elif setting.is_member(product) and target.kind == "refuted":
        report.conclusion = FAIL_REFUTED
    elif product.kind == "refuted":
        report.conclusion = NOT_APPLICABLE
        report.error = "u·a is not positive"
    else:
        report.conclusion = INCONCLUSIVE
    report.seconds = time.perf_counter() - started

    color = {PASS: Fore.GREEN, FAIL_REFUTED: Fore.RED, NOT_APPLICABLE: Fore.WHITE}.get(
        report.conclusion, Fore.YELLOW
    )
    say("Orchestrator", f"Conclusion: {report.conclusion}", color)
    logger.info("experiment %s u=%s a=%s -> %s", setting.name, report.u, report.a, report.conclusion)
    return report


def _random_combination(products, rng: random.Random, min_degree: int, max_degree: int) -> SparsePoly:
    pool = [p for w, p in products if min_degree <= sum(w) <= max_degree]
    total = SparsePoly.zero(pool[0].nvars)
    while total.is_zero():
        for p in pool:
            if rng.random() < 0.5:
                total = total + p.scale(Fraction(rng.randint(1, 4), 2))
    return total


def sample_order_unit(setting: ConeSetting, rng: random.Random) -> SparsePoly:
    """A positive constant plus a random positive combination of the generators."""
    products = enumerate_products(setting.cone, 1)
    margin = Fraction(rng.randint(1, 4), 2)
    return _random_combination(products, rng, 1, 1) + margin


def sample_positive(setting: ConeSetting, rng: random.Random, degree: int = 2) -> SparsePoly:
    products = enumerate_products(setting.cone, degree)
    return _random_combination(products, rng, 1, degree)


def sample_negative(setting: ConeSetting, rng: random.Random, degree: int = 2) -> SparsePoly:
    """A positive sample shifted down so it is negative at a random vertex."""
    a = sample_positive(setting, rng, degree)
    vertex = rng.choice(setting.cone.polytope.vertices)
    depth = Fraction(rng.randint(1, 4), 4)
    return a - (a.evaluate(vertex) + depth)


def cancellation_sweep(
    tag: str,
    trials: Optional[int] = None,
    seed: Optional[int] = None,
    caps: Optional[SearchCaps] = None,
    degree: int = 2,
    controls: Optional[int] = None,
) -> pd.DataFrame:
    """Randomized cancellation trials on a polytope ring; no trial may end FAIL_REFUTED.

    ``trials`` rows sample a from the cone. ``controls`` extra rows sample an a that is
    negative at a vertex, so u·a is refuted there and the row ends NOT_APPLICABLE.
    """
    trials = SWEEP_CONFIG["trials"] if trials is None else trials
    seed = SWEEP_CONFIG["seed"] if seed is None else seed
    controls = SWEEP_CONFIG["controls"] if controls is None else controls
    caps = caps or SearchCaps.from_config()
    setting = get_setting(tag)
    if not isinstance(setting, ConeSetting) or setting.cone.polytope is None:
        raise SettingError(f"sweeps need a polytope setting, got {tag}")

    agent_print(
        "Sweep", f"Running {trials} cancellation trials and {controls} controls on {tag} (seed {seed})...", Fore.MAGENTA
    )
    rng = random.Random(seed)
    rows: List[dict] = []
    for trial in range(trials):
        u = sample_order_unit(setting, rng)
        a = sample_positive(setting, rng, degree)
        report = run_cancellation_experiment(setting, u, a, caps, verbose=False)
        rows.append(dict(report.as_row(), trial=trial, sample="positive"))
    for trial in range(trials, trials + controls):
        u = sample_order_unit(setting, rng)
        a = sample_negative(setting, rng, degree)
        report = run_cancellation_experiment(setting, u, a, caps, verbose=False)
        rows.append(dict(report.as_row(), trial=trial, sample="control"))
    frame = pd.DataFrame(rows)
    agent_print("Sweep", f"Done: {summarize_sweep(frame)}", Fore.MAGENTA)
    return frame


def summarize_sweep(frame: pd.DataFrame) -> str:
    counts = frame["conclusion"].value_counts()
    inconclusive = counts.get(INCONCLUSIVE, 0)
    return (
        f"{counts.get(PASS, 0)} pass, {counts.get(FAIL_REFUTED, 0)} refuted, "
        f"{counts.get(NOT_APPLICABLE, 0)} not applicable, "
        f"{inconclusive} inconclusive ({inconclusive / max(len(frame), 1):.0%})"
    )


def sweep_table(frame: pd.DataFrame) -> str:
    summary = frame.groupby(["setting", "sample", "conclusion"]).size().reset_index(name="trials")
    return tabulate(summary.values.tolist(), headers=list(summary.columns))
