"""
Ring settings: where a cancellation experiment runs.
Supports: cones generated by polytope facet forms, the disk cone, and the two toy orderings of Q[x].
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, replace
from typing import Dict, Optional, Sequence

from cone_cert import (
    GeneratedCone,
    Member,
    OrderUnitYes,
    Refuted,
    SearchCaps,
    certify_membership,
    is_order_unit,
    recheck_refutation,
    verify_certificate,
)
from fixtures import POLYTOPES, disk_cone, polytope_cone
from multipoly import SparsePoly
from toy_rings import toy_member, toy_order_unit


class SettingError(ValueError):
    """Unknown setting tag or a polynomial that does not fit the setting"""


@dataclass(frozen=True)
class ToyDecision:
    """Exact toy-ring answer; non-members are refuted by the decision procedure itself."""
    member: bool
    ring: str

    @property
    def kind(self) -> str:
        return "member" if self.member else "refuted"


@dataclass(frozen=True)
class ToyOrderUnit:
    positive: bool

    @property
    def verdict(self) -> str:
        return "Yes" if self.positive else "No"


class RingSetting(ABC):
    """Abstract base class for ring settings"""

    @abstractmethod
    def membership(self, f: SparsePoly, caps: SearchCaps):
        """Decide or search positivity of f; the result has a ``kind``"""
        pass

    @abstractmethod
    def order_unit(self, u: SparsePoly, caps: SearchCaps):
        """Order unit check; the result has a ``verdict``"""
        pass

    @abstractmethod
    def verify(self, f: SparsePoly, verdict) -> bool:
        """Re-check a certificate or refutation independently"""
        pass

    @property
    @abstractmethod
    def name(self) -> str:
        pass

    @property
    @abstractmethod
    def variables(self) -> Sequence[str]:
        pass

    def parse(self, text: str) -> SparsePoly:
        return SparsePoly.from_expression(text, self.variables)

    def is_member(self, verdict) -> bool:
        return verdict.kind == "member"

    def is_unit(self, verdict) -> bool:
        return verdict.verdict == "Yes"


class ConeSetting(RingSetting):
    """A finitely generated cone, searched by exact LP"""

    def __init__(self, cone: GeneratedCone):
        self.cone = cone

    def membership(self, f: SparsePoly, caps: SearchCaps):
        return certify_membership(f, self.cone, caps=caps)

    def order_unit(self, u: SparsePoly, caps: SearchCaps):
        return is_order_unit(u, self.cone, caps)

    def verify(self, f: SparsePoly, verdict) -> bool:
        if isinstance(verdict, Member):
            return verify_certificate(f, verdict.certificate, self.cone)
        if isinstance(verdict, Refuted):
            return recheck_refutation(f, self.cone, verdict)
        if isinstance(verdict, OrderUnitYes):
            return verify_certificate(f - verdict.margin, verdict.certificate, self.cone)
        return False

    @property
    def name(self) -> str:
        return self.cone.name or "cone"

    @property
    def variables(self) -> Sequence[str]:
        return self.cone.variables


class ToyRingSetting(RingSetting):
    """Q[x] with one of the toy orderings, decided exactly"""

    def __init__(self, ring: str):
        self.ring = ring

    def membership(self, f: SparsePoly, caps: SearchCaps):
        return ToyDecision(toy_member(self.ring, f), self.ring)

    def order_unit(self, u: SparsePoly, caps: SearchCaps):
        return ToyOrderUnit(toy_order_unit(u))

    def verify(self, f: SparsePoly, verdict) -> bool:
        return toy_member(self.ring, f) == verdict.member

    @property
    def name(self) -> str:
        return f"toy-{self.ring}"

    @property
    def variables(self) -> Sequence[str]:
        return ("x",)


SETTING_TAGS = tuple(POLYTOPES) + ("disk", "toy-r1", "toy-r2")


def get_ring_setting(tag: str) -> RingSetting:
    """
    Factory function to create a ring setting from its tag.

    Tags:
        interval, triangle, square, cube, trapezoid, pyramid, pentagon: R[K] for the named polytope
        disk: the cone generated by x, y and 1 − (x + 3/5)² − (y + 3/5)²
        toy-r1, toy-r2: the toy orderings of Q[x]
    """
    tag = tag.lower()
    if tag in POLYTOPES:
        return ConeSetting(polytope_cone(tag))
    elif tag == "disk":
        return ConeSetting(disk_cone())
    elif tag in ("toy-r1", "toy-r2"):
        return ToyRingSetting(tag.split("-")[1])
    else:
        raise SettingError(f"Unknown ring setting: {tag}. Supported: {', '.join(SETTING_TAGS)}")


# Settings are immutable, so one instance per tag is shared (lazy loaded)
_settings: Dict[str, RingSetting] = {}


def get_setting(tag: str) -> RingSetting:
    """Get or create the shared setting for a tag"""
    key = tag.lower()
    if key not in _settings:
        _settings[key] = get_ring_setting(key)
    return _settings[key]


def setting_for_cone(cone: GeneratedCone, name: Optional[str] = None) -> RingSetting:
    return ConeSetting(cone if name is None else replace(cone, name=name))
