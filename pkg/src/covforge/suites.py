"""Named bundles of exact identity checks, shared by the CLI and the tests."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .binary import coefficient_context
from .covariants import (covariant_proportionality, evaluate_expression, identity_check,
                         lemma_e_check, proportionality_scalar)
from .exact import MultiPoly, format_scalar
from .goettingen import goettingen_general, polar_identity_check


@dataclass
class CheckResult:
    suite: str
    name: str
    ok: bool
    scalar: Fraction | None = None

    def to_json(self) -> dict:
        return {"suite": self.suite, "name": self.name, "ok": self.ok,
                "scalar": None if self.scalar is None else format_scalar(self.scalar)}


def _prop(suite, name, lhs, rhs, d):
    c = proportionality_scalar(lhs, rhs, d)
    return CheckResult(suite, name, c is not None and c != 0, c)


def gordan_suite() -> list:
    out = []
    for d in (5, 6):
        c = Fraction(2 * (2 * d - 5), d - 4)
        out.append(CheckResult("gordan", f"(F,(F,F)_4)_1 = {c} (F,(F,F)_2)_3, d={d}",
                               identity_check("T(F,T(F,F,4),1)", f"{c}*T(F,T(F,F,2),3)", d)))
    for d in (4, 5, 6):
        c1 = Fraction(d * (2 * d - 5), (d - 3) * (2 * d - 1))
        c2 = Fraction(2 * (2 * d - 5), d - 3)
        rhs = f"{c1}*T(F,F,2)^2 + {c2}*T(F^2,T(F,F,2),2)"
        out.append(CheckResult("gordan", f"F^2 (F,F)_4 = {c1} (F,F)_2^2 + {c2} (F^2,(F,F)_2)_2, d={d}",
                               identity_check("F^2*T(F,F,4)", rhs, d)))
    return out


def lowr_suite() -> list:
    out = []
    for d in (4, 5, 6):
        out.append(_prop("lowr", f"Gott_2 ~ (F,(F,F)_2)_1, d={d}", "GOTT(2)", "T(F,T(F,F,2),1)", d))
        rhs = f"{3 * (2 * d - 3)}*T(F,F,2)^2 - {2 * (d - 2)}*F^2*T(F,F,4)"
        out.append(_prop("lowr", f"Gott_3 ~ 3(2d-3)(F,F)_2^2 - 2(d-2)F^2(F,F)_4, d={d}",
                         "GOTT(3)", rhs, d))
    return out


def quadg_suite() -> list:
    """Gott_psi for psi = (B,B)_2n is proportional to (F,F)_(2n+2)."""
    out = []
    for d in (4, 6):
        for n in (0, 1):
            psi = evaluate_expression(f"T(F,F,{2 * n})", d - 2)
            G = goettingen_general(psi, 1, d)
            c = covariant_proportionality(G, evaluate_expression(f"T(F,F,{2 * n + 2})", d))
            out.append(CheckResult("quadG", f"Gott_(B,B)_{2 * n} ~ (F,F)_{2 * n + 2}, d={d}",
                                   c is not None and c != 0, c))
    return out


def twisted_cubic_suite() -> list:
    out = []
    for r in (2, 4, 5):
        ok = evaluate_expression(f"T(GOTT({r}),F,2)", 3).is_zero()
        out.append(CheckResult("twisted-cubic", f"(Gott_{r},3, F)_2 = 0", ok))
    out.append(_prop("twisted-cubic", "Gott_1,3^2 ~ (F, Gott_2,3)_1", "GOTT(1)^2", "T(F,GOTT(2),1)", 3))
    # same identity with Hilb normalisation; the scalars differ by kappa_2,3 / kappa_1,3^2 = 3/4
    c = proportionality_scalar("HILB(1)^2", "T(F,HILB(2),1)", 3)
    out.append(CheckResult("twisted-cubic", "Hilb_1,3^2 = -1/2 (F, Hilb_2,3)_1", c == Fraction(-1, 2), c))
    return out


def polar_suite() -> list:
    out = []
    for r, d in ((1, 4), (2, 4), (2, 6)):
        res = polar_identity_check(r, d)
        out.append(CheckResult("polar", f"polar identity, r={r}, d={d}", res.ok, res.scalar))
    return out


def _random_poly(d: int, degree: int, rng: random.Random, terms: int = 5) -> MultiPoly:
    ctx = coefficient_context("a", d)
    P = MultiPoly.zero(ctx)
    for _ in range(terms):
        m = MultiPoly.const(ctx, rng.randint(-5, 5))
        for _ in range(degree):
            m = m * MultiPoly.var(ctx, f"a{rng.randint(0, d)}")
        P = P + m
    return P


def lemma_e_suite(seed: int = 0) -> list:
    rng = random.Random(seed)
    out = []
    for d in range(1, 7):
        for n in range(5):
            P = _random_poly(d, rng.randint(1, 3), rng)
            out.append(CheckResult("lemmaE", f"random P, d={d}, n={n}", lemma_e_check(P, n, d)))
    return out


SUITES = {
    "gordan": gordan_suite,
    "lowr": lowr_suite,
    "quadG": quadg_suite,
    "twisted-cubic": twisted_cubic_suite,
    "polar": polar_suite,
    "lemmaE": lemma_e_suite,
}


def run_suites(names=None) -> list:
    names = list(SUITES) if not names else names
    out = []
    for name in names:
        out.extend(SUITES[name]())
    return out
