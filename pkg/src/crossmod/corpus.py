"""The checked-in example surfaces and the test coefficient crossed modules.

Diagrams (``.kwb``) and reduced presentations (``.cmp``) live side by side
in the ``corpus`` package directory, or in ``$CROSSMOD_CORPUS`` when set.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .algebra import (
    FiniteCrossedModule,
    make_conjugation,
    make_crossed_module,
    make_cyclic,
    make_cyclic_unit_action,
    make_inclusion,
    make_symmetric,
    make_trivial_crossed_module,
    parse_crossed_module,
)
from .kwb import KwbDiagram, parse_diagram
from .presentation import CrossedModulePresentation, parse_presentation

CORPUS_ENV = "CROSSMOD_CORPUS"


class UnknownExample(KeyError):
    def __str__(self) -> str:
        return f"unknown example {self.args[0]!r}; try `crossmod examples`"


@dataclass(frozen=True)
class Example:
    name: str
    description: str
    surface: str  # "sphere", "torus", "two tori", ...


CATALOG: tuple[Example, ...] = (
    Example("trivial_sphere_K1", "unknotted sphere, band passing under its circle", "sphere"),
    Example("trivial_sphere_K2", "unknotted sphere, one untwisted band", "sphere"),
    Example("trivial_sphere_K3", "unknotted sphere, band joining two circles", "sphere"),
    Example("spun_trefoil", "spun trefoil knot", "sphere"),
    Example("spun_hopf", "spun Hopf link", "two tori"),
    Example("sigma_prime", "surface with the spun Hopf link's pi_1 but a different invariant", "two tori"),
    Example("trivial_torus", "unknotted torus (derived construction)", "torus"),
    Example("trivial_torus_pair", "two split unknotted tori (derived construction)", "two tori"),
)


def corpus_dir() -> Path:
    override = os.environ.get(CORPUS_ENV)
    return Path(override) if override else Path(__file__).with_name("corpus")


def list_examples(substring: str = "") -> list[Example]:
    return [ex for ex in CATALOG if substring in ex.name]


def example_path(name: str, kind: str = "kwb") -> Path:
    if name not in {ex.name for ex in CATALOG}:
        raise UnknownExample(name)
    return corpus_dir() / f"{name}.{kind}"


def load_example(name: str, kind: str = "kwb") -> KwbDiagram | CrossedModulePresentation:
    """Parse the ``kind`` ("kwb" or "cmp") file of a catalog entry."""
    if kind not in ("kwb", "cmp"):
        raise ValueError(f"kind must be 'kwb' or 'cmp', not {kind!r}")
    text = example_path(name, kind).read_text()
    return parse_diagram(text) if kind == "kwb" else parse_presentation(text)


def load_diagram(name: str) -> KwbDiagram:
    return load_example(name, "kwb")  # type: ignore[return-value]


def load_presentation(name: str) -> CrossedModulePresentation:
    return load_example(name, "cmp")  # type: ignore[return-value]


# -- coefficients ------------------------------------------------------------------


def _a3_in_s3() -> FiniteCrossedModule:
    S3 = make_symmetric(3)
    # A3 = elements of order dividing 3
    even = [g for g in S3.elements() if S3.power(g, 3) == S3.identity]
    return make_inclusion(S3, even, "A3_in_S3")


def _z2_on_z2() -> FiniteCrossedModule:
    # Z2 -> Z2 identity, trivial action: the smallest module with onto boundary
    Z2 = make_cyclic(2)
    return make_crossed_module(Z2, Z2, [0, 1], [[0, 1], [0, 1]], "id_Z2")


# name -> (builder, description); the first four are the named test set
COEFFICIENTS: dict[str, tuple[Callable[[], FiniteCrossedModule], str]] = {
    "A": (lambda: make_cyclic_unit_action(2, 3, 2, "A"), "Z2 acting on Z3 by sign, trivial boundary"),
    "conj_S3": (lambda: make_conjugation(make_symmetric(3), "conj_S3"), "(S3, S3, id, conjugation)"),
    "z2_z4_sign": (lambda: make_cyclic_unit_action(2, 4, 3, "z2_z4_sign"), "Z2 acting on Z4 by sign, trivial boundary"),
    "trivial": (make_trivial_crossed_module, "trivial crossed module"),
    "A3_in_S3": (_a3_in_s3, "inclusion of A3 in S3 with conjugation"),
    "id_Z2": (_z2_on_z2, "(Z2, Z2, id, trivial action)"),
    "z2_z5_sign": (lambda: make_cyclic_unit_action(2, 5, 4, "z2_z5_sign"), "Z2 acting on Z5 by sign"),
    "z4_z5": (lambda: make_cyclic_unit_action(4, 5, 2, "z4_z5"), "Z4 acting on Z5 by multiplication by 2"),
    "z3_z7": (lambda: make_cyclic_unit_action(3, 7, 2, "z3_z7"), "Z3 acting on Z7 by multiplication by 2"),
}

NAMED_TEST_SET = ("A", "conj_S3", "z2_z4_sign", "trivial")


def coefficient(name: str) -> FiniteCrossedModule:
    """A catalog coefficient by name, or a ``crossed_module v1`` file path."""
    if name in COEFFICIENTS:
        return COEFFICIENTS[name][0]()
    path = Path(name)
    if path.is_file():
        return parse_crossed_module(path.read_text(), path.stem)
    xmod = corpus_dir() / f"{name}.xmod"
    if xmod.is_file():
        return parse_crossed_module(xmod.read_text(), name)
    raise UnknownExample(name)


def all_coefficients() -> list[FiniteCrossedModule]:
    return [build() for build, _ in COEFFICIENTS.values()]
