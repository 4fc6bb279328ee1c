"""Named checks binding the character formulas to the Fock-space oracle.

Each check returns a :class:`CheckReport`. Nothing here trusts either side:
a formula result and an oracle result are computed independently and
compared exactly. A check whose truncation margin is violated reports
``skipped`` instead of passing.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from fractions import Fraction
from typing import Any, Callable, Optional, Union

from . import characters as ch
from . import fock
from .fock import FockVector
from .qseries import BiSeries, CharSeries, partition_series

Rational = Union[int, Fraction]

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


@dataclass
class CheckReport:
    name: str
    status: str
    parameters: dict[str, Any] = field(default_factory=dict)
    witness: Optional[dict[str, Any]] = None
    reason: Optional[str] = None

    def __post_init__(self):
        if self.status == FAIL and self.witness is None:
            raise ValueError(f"failed check {self.name} needs a witness")

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_json(self) -> dict[str, Any]:
        from .jsonio import encode

        out: dict[str, Any] = {
            "name": self.name,
            "status": self.status,
            "parameters": encode(self.parameters),
        }
        if self.witness is not None:
            out["witness"] = encode(self.witness)
        if self.reason is not None:
            out["reason"] = self.reason
        return out


def _skip(name: str, params: dict, reason: str) -> CheckReport:
    return CheckReport(name, SKIPPED, params, reason=reason)


def _fail(name: str, params: dict, **witness) -> CheckReport:
    return CheckReport(name, FAIL, params, witness=witness)


def _first_char_mismatch(a: CharSeries, b: CharSeries) -> dict[str, Any]:
    if a.offset != b.offset:
        return {"offset": a.offset, "expected_offset": b.offset}
    for n in range(min(a.order, b.order) + 1):
        if a.body[n] != b.body[n]:
            return {"exponent": a.offset + n, "value": a.body[n], "expected": b.body[n]}
    return {"order": a.order, "expected_order": b.order}


def _first_vector_mismatch(lhs: FockVector, rhs: FockVector) -> dict[str, Any]:
    diff = lhs - rhs
    state = min(diff.terms)
    return {
        "term": f"|{state[0]};{list(state[1])}>",
        "lhs": lhs.coefficient(state),
        "rhs": rhs.coefficient(state),
    }


# --- individual checks --------------------------------------------------------

def check_ground_state(q: Rational, cutoff: int) -> CheckReport:
    """``alpha_q(L_n)`` kills the vacuum for n=1..3 and ``alpha_q(L_0)`` gives ``q**2``."""
    q = Fraction(q)
    params = {"q": q, "cutoff": cutoff}
    name = "ground_state"
    if cutoff < 2:
        return _skip(name, params, "cutoff below 2")
    omega = FockVector.vacuum(cutoff)
    for n in (1, 2, 3):
        w = fock.deformed_l_apply(q, n, omega)
        if not w.is_zero():
            return _fail(name, params, mode=n, image=repr(w))
    w = fock.deformed_l_apply(q, 0, omega)
    if w != omega * (q * q):
        return _fail(name, params, mode=0, image=repr(w), expected=q * q)
    return CheckReport(name, PASS, params)


def check_vanishing_and_norms(q1: Rational, cutoff: int) -> CheckReport:
    """Norms of ``(Q-_{-2q1})**nu Omega`` and vanishing at ``nu = 2q1 + 1``."""
    q1 = Fraction(q1)
    params = {"q1": q1, "cutoff": cutoff}
    name = "vanishing_and_norms"
    if not ch.is_half_natural(q1):
        return _skip(name, params, "q1 not in (1/2)N0")
    n = int(2 * q1)
    if cutoff < n * (n + 1) + 2:
        return _skip(name, params, f"cutoff below {n * (n + 1) + 2}")
    norms = []
    for nu in range(n + 2):
        v = fock.lowered_vector(q1, nu, cutoff)
        got = fock.norm_squared(v)
        want = ch.lowered_norm_formula(q1, nu)
        if got != want or (nu > n) != v.is_zero():
            return _fail(name, params, nu=nu, norm=got, expected=want, zero=v.is_zero())
        if v.charges() - {-nu} or v.energies() - {n * nu}:
            return _fail(name, params, nu=nu, charges=sorted(v.charges()), energies=sorted(v.energies()))
        norms.append(got)
    params["norms"] = norms
    return CheckReport(name, PASS, params)


def check_eigenvalue(q1: Rational, q2: Rational, nu: int, cutoff: int) -> CheckReport:
    """Oracle ``alpha_{q1+q2}(L_0)`` eigenvalue of the lowered vector against the formula."""
    q1, q2 = Fraction(q1), Fraction(q2)
    params = {"q1": q1, "q2": q2, "nu": nu, "cutoff": cutoff}
    name = "eigenvalue"
    n = int(2 * q1)
    if not ch.is_half_natural(q1) or not 0 <= nu <= n:
        return _skip(name, params, "nu outside 0..2q1")
    if cutoff < n * nu:
        return _skip(name, params, f"cutoff below {n * nu}")
    v = fock.lowered_vector(q1, nu, cutoff)
    got = fock.deformed_eigenvalue(q1 + q2, v)
    want = ch.product_state_energy(q1, q2, nu)
    params["eigenvalue"] = got
    if got != want:
        return _fail(name, params, eigenvalue=got, expected=want)
    return CheckReport(name, PASS, params)


def check_twisted_trace(q_total: Rational, nu: int, order: int) -> CheckReport:
    """Charge ``-nu`` trace of ``t**alpha_q(L_0)``: oracle count against the character formula.

    When ``q_total - nu`` is a half-integer the character must also
    telescope into one copy of each degenerate sector ``s >= |q_total - nu|``.
    """
    q = Fraction(q_total)
    params = {"q_total": q, "nu": nu, "order": order}
    name = "twisted_trace"
    if order < nu * nu:
        return _skip(name, params, f"order below nu^2 = {nu * nu}")
    oracle = fock.graded_dimension(-nu, q, order + nu * nu)
    formula = ch.twisted_char(q, nu, order)
    if oracle.offset != formula.offset or oracle.body != formula.body:
        return _fail(name, params, **_first_char_mismatch(oracle, formula))
    result = ch.decompose(oracle)
    base = q - nu
    if ch.as_half_integer(base) is None:
        expected = [((base) ** 2, 1)]
        params["sector"] = "continuum"
    else:
        s0 = abs(base)
        top = base * base + order
        expected = []
        s = s0
        while s * s <= top:
            expected.append((s * s, 1))
            s += 1
        params["sector"] = "degenerate tower"
    got = [(label.h, mult) for label, mult in result.summands]
    params["sectors"] = [h for h, _ in got]
    if got != expected:
        return _fail(name, params, sectors=[h for h, _ in got], expected=[h for h, _ in expected])
    return CheckReport(name, PASS, params)


check_prop23 = check_twisted_trace


def check_fusion(q1: Rational, q2: Rational, order: int) -> CheckReport:
    """``fuse`` against the closed form and against oracle-derived sectors."""
    q1, q2 = Fraction(q1), Fraction(q2)
    params = {"q1": q1, "q2": q2, "order": order}
    name = "fusion"
    n = int(2 * q1)
    if order < n * n:
        return _skip(name, params, f"order below (2q1)^2 = {n * n}")
    result = ch.fuse(q1, q2)
    closed = sorted((q1 + q2 - nu) ** 2 for nu in range(n + 1))
    got = sorted(label.h for label, mult in result.summands for _ in range(mult))
    if got != closed or result.total_multiplicity != n + 1:
        return _fail(name, params, summands=got, expected=closed)
    oracle_sectors = []
    for nu in range(n + 1):
        dec = ch.decompose(fock.graded_dimension(-nu, q1 + q2, order + nu * nu))
        if len(dec.summands) != 1 or dec.summands[0][0].degenerate:
            return _fail(name, params, nu=nu, oracle=str(dec))
        oracle_sectors.append(dec.summands[0][0].h)
    if sorted(oracle_sectors) != closed:
        return _fail(name, params, oracle=sorted(oracle_sectors), expected=closed)
    params["summands"] = [(q1 + q2 - nu) ** 2 for nu in range(n + 1)]
    return CheckReport(name, PASS, params)


def _relations(deformed_q: Fraction) -> list[tuple[str, str, str, Callable]]:
    """``(label, X, Y, rhs)`` with ``[X_n, Y_m] v == rhs(n, m, get, v)``."""

    def central(v: FockVector, n: int, m: int, c: Fraction) -> FockVector:
        return v * c if n + m == 0 else FockVector.zero(v.cutoff)

    def virasoro(op):
        return lambda n, m, get, v: get(op, n + m) * (n - m) + central(
            v, n, m, Fraction(n * (n * n - 1), 12)
        )

    def zero(n, m, get, v):
        return FockVector.zero(v.cutoff)

    return [
        ("[Q+,Q-]", "Q+", "Q-", lambda n, m, get, v: get("Q3", n + m) * 2 + central(v, n, m, Fraction(n))),
        ("[Q3,Q+]", "Q3", "Q+", lambda n, m, get, v: get("Q+", n + m)),
        ("[Q3,Q-]", "Q3", "Q-", lambda n, m, get, v: -get("Q-", n + m)),
        ("[Q3,Q3]", "Q3", "Q3", lambda n, m, get, v: central(v, n, m, Fraction(n, 2))),
        ("[Q+,Q+]", "Q+", "Q+", zero),
        ("[Q-,Q-]", "Q-", "Q-", zero),
        ("[L,L]", "L", "L", virasoro("L")),
        ("[L,Q3]", "L", "Q3", lambda n, m, get, v: get("Q3", n + m) * (-m)),
        ("[L,Q+]", "L", "Q+", lambda n, m, get, v: get("Q+", n + m) * (-m)),
        ("[L,Q-]", "L", "Q-", lambda n, m, get, v: get("Q-", n + m) * (-m)),
        ("[aL,aL]", "aL", "aL", virasoro("aL")),
    ]


def check_commutators(window: int, cutoff: int, charge_window: int = 3,
                      deformed_q: Rational = Fraction(1, 3)) -> CheckReport:
    """Current-algebra, Virasoro and mixed commutators on every admissible basis state.

    A state is admissible when its energy is at most ``cutoff - 2*window``,
    so every product of two modes stays inside the truncation.
    """
    deformed_q = Fraction(deformed_q)
    params = {"window": window, "cutoff": cutoff, "charge_window": charge_window,
              "deformed_q": deformed_q, "cocycle": fock.get_cocycle()}
    name = "commutators"
    if cutoff < 2 * window + 4:
        return _skip(name, params, f"cutoff below 2*window+4 = {2 * window + 4}")
    ops: dict[str, Callable[[int, FockVector], FockVector]] = {
        "Q3": fock.q3_apply,
        "Q+": fock.qplus_apply,
        "Q-": fock.qminus_apply,
        "L": fock.l_apply,
        "aL": lambda n, v: fock.deformed_l_apply(deformed_q, n, v),
    }
    relations = _relations(deformed_q)
    indices = range(-window, window + 1)
    states = 0
    for v in fock.iter_admissible(charge_window, cutoff, 2 * window):
        states += 1
        cache: dict[tuple[str, int], FockVector] = {}

        def get(op: str, k: int, v=v, cache=cache) -> FockVector:
            key = (op, k)
            if key not in cache:
                cache[key] = ops[op](k, v)
            return cache[key]

        for label, x, y, rhs_fn in relations:
            for n in indices:
                for m in indices:
                    lhs = ops[x](n, get(y, m)) - ops[y](m, get(x, n))
                    rhs = rhs_fn(n, m, get, v)
                    if lhs != rhs:
                        state = next(iter(v.terms))
                        return _fail(name, params, relation=label, n=n, m=m,
                                     state=f"|{state[0]};{list(state[1])}>",
                                     **_first_vector_mismatch(lhs, rhs))
    params["states"] = states
    params["relations"] = [r[0] for r in relations]
    return CheckReport(name, PASS, params)


def check_sugawara(window: int, cutoff: int, max_energy: int = 6) -> CheckReport:
    """Oscillator ``L_n`` against the Sugawara form built from the currents."""
    params = {"window": window, "cutoff": cutoff, "max_energy": max_energy}
    name = "sugawara"
    bound = min(max_energy, cutoff - window)
    if bound < 0:
        return _skip(name, params, "cutoff below window")
    count = 0
    for state in fock.enumerate_basis(3, bound):
        v = FockVector.basis(state, cutoff)
        for n in range(-window, window + 1):
            a, b = fock.l_apply(n, v), fock.sugawara_l_apply(n, v)
            if a != b:
                return _fail(name, params, n=n, state=f"|{state[0]};{list(state[1])}>",
                             **_first_vector_mismatch(a, b))
        count += 1
    params["states"] = count
    return CheckReport(name, PASS, params)


def check_vacuum_character(order: int, charge_window: int) -> CheckReport:
    """Oracle-assembled two-variable vacuum character against the spin-sum formula."""
    params = {"order": order, "charge_window": charge_window}
    name = "vacuum_character"
    formula = ch.vacuum_affine_char(order)
    coeffs: dict[tuple[int, int], Fraction] = {}
    reach = min(charge_window, math.isqrt(order))
    for m in range(-reach, reach + 1):
        g = fock.graded_dimension(m, 0, order)
        for e, c in g.terms():
            coeffs[(m, int(e))] = c
    oracle = BiSeries(coeffs, order)
    if not oracle.grading_bound_holds() or not formula.grading_bound_holds():
        bad = [k for k in list(oracle.coefficients) + list(formula.coefficients) if k[1] < k[0] ** 2]
        return _fail(name, params, violation=str(bad[0]))
    restricted = BiSeries({k: c for k, c in formula.coefficients.items() if abs(k[0]) <= reach}, order)
    if oracle != restricted:
        diff = sorted(set(oracle.coefficients.items()) ^ set(restricted.coefficients.items()))
        return _fail(name, params, term=str(diff[0]))
    params["terms"] = len(oracle.coefficients)
    return CheckReport(name, PASS, params)


def check_tower(s: Rational, order: int) -> CheckReport:
    """``t**(s**2) p(t)`` telescopes into one copy of each sector ``s' in s + N0``."""
    s = Fraction(s)
    params = {"s": s, "order": order}
    name = "tower"
    result = ch.decompose(ch.twisted_char(s, 0, order))
    got = [(label.h, mult) for label, mult in result.summands]
    expected = []
    t = s
    while t * t <= s * s + order:
        expected.append((t * t, 1))
        t += 1
    if got != expected or not result.unresolved_tail:
        return _fail(name, params, sectors=[h for h, _ in got], expected=[h for h, _ in expected],
                     tail=result.unresolved_tail)
    params["sectors"] = [h for h, _ in got]
    params["unresolved_tail"] = True
    return CheckReport(name, PASS, params)


def check_charge_zero_trace(q: Rational, order: int) -> CheckReport:
    """Charge-0 trace of ``t**alpha_q(L_0)``: one continuum character or a degenerate tower."""
    q = Fraction(q)
    params = {"q": q, "order": order}
    name = "charge_zero_trace"
    oracle = fock.graded_dimension(0, q, order)
    if oracle.offset != q * q or oracle.body != partition_series(order):
        return _fail(name, params, **_first_char_mismatch(oracle, CharSeries(q * q, partition_series(order))))
    result = ch.decompose(oracle)
    if ch.as_half_integer(q) is None:
        ok = len(result.summands) == 1 and not result.summands[0][0].degenerate
        params["sector"] = "continuum"
    else:
        ok = len(result.summands) > 1 and result.unresolved_tail and all(
            label.degenerate and mult == 1 for label, mult in result.summands
        )
        params["sector"] = "degenerate tower"
    params["sectors"] = result.h_values()
    if not ok:
        return _fail(name, params, sectors=str(result))
    return CheckReport(name, PASS, params)


def check_mixture(q1: Rational, r: Rational) -> CheckReport:
    q1, r = Fraction(q1), Fraction(r)
    params = {"q1": q1, "r": r}
    name = "mixture"
    w = ch.mixture_weights(q1, r)
    params["weights"] = list(w.weights)
    if sum(w.weights) != 1 or any(x < 0 for x in w.weights) or len(w.weights) != int(2 * q1) + 1:
        return _fail(name, params, total=sum(w.weights))
    return CheckReport(name, PASS, params)


# --- suite ------------------------------------------------------------------------

def _fr(*xs) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in xs)


@dataclass(frozen=True)
class SuiteConfig:
    order: int = 12
    cutoff: int = 14
    charge_window: int = 3
    window: int = 3
    q1_grid: tuple[Fraction, ...] = _fr("1/2", 1, "3/2")
    q2_grid: tuple[Fraction, ...] = _fr("1/3", "1/4", "2/5", "5/6")
    q_totals: tuple[Fraction, ...] = _fr("5/6", "5/4", "3/2", 2)
    twisted_nus: tuple[int, ...] = (0, 1, 2)
    ground_charges: tuple[Fraction, ...] = _fr(0, "1/3", "5/6", "5/2")
    vacuum_order: int = 9
    tower_order: int = 20
    tower_spins: tuple[Fraction, ...] = _fr(0, "1/2", 1, "3/2")
    charge_zero_charges: tuple[Fraction, ...] = _fr("1/3", "1/2", 1)
    mixture_q1: tuple[Fraction, ...] = _fr("1/2", 1, "3/2", 2)
    mixture_r: tuple[Fraction, ...] = _fr(0, "1/3", "1/2", 1)
    deformed_q: Fraction = Fraction(1, 3)
    inject_fault: bool = False

    def with_overrides(self, **kw) -> SuiteConfig:
        known = {f.name for f in fields(self)}
        return replace(self, **{k: v for k, v in kw.items() if k in known and v is not None})


CHECK_NAMES = (
    "fusion", "twisted_trace", "vanishing_and_norms", "eigenvalue", "ground_state",
    "commutators", "sugawara", "vacuum_character", "tower", "charge_zero_trace", "mixture",
)

_CHECKS: dict[str, Callable[..., CheckReport]] = {
    "fusion": check_fusion,
    "twisted_trace": check_twisted_trace,
    "vanishing_and_norms": check_vanishing_and_norms,
    "eigenvalue": check_eigenvalue,
    "ground_state": check_ground_state,
    "commutators": check_commutators,
    "sugawara": check_sugawara,
    "vacuum_character": check_vacuum_character,
    "tower": check_tower,
    "charge_zero_trace": check_charge_zero_trace,
    "mixture": check_mixture,
}


def plan(config: SuiteConfig, only: Optional[list[str]] = None) -> list[tuple[str, dict]]:
    """The ordered list of ``(check name, arguments)`` a suite run executes."""
    c = config
    tasks: list[tuple[str, dict]] = []
    for q1 in c.q1_grid:
        for q2 in c.q2_grid:
            tasks.append(("fusion", {"q1": q1, "q2": q2, "order": c.order}))
    prop_args = []
    for q1 in c.q1_grid:
        for q2 in c.q2_grid:
            prop_args.extend((q1 + q2, nu) for nu in range(int(2 * q1) + 1))
    prop_args.extend((q, nu) for q in c.q_totals for nu in c.twisted_nus)
    for q, nu in dict.fromkeys(prop_args):
        tasks.append(("twisted_trace", {"q_total": q, "nu": nu, "order": c.order}))
    for q1 in c.q1_grid:
        tasks.append(("vanishing_and_norms", {"q1": q1, "cutoff": c.cutoff}))
    for q1 in c.q1_grid:
        for q2 in c.q2_grid:
            for nu in range(int(2 * q1) + 1):
                tasks.append(("eigenvalue", {"q1": q1, "q2": q2, "nu": nu, "cutoff": c.cutoff}))
    for q in c.ground_charges:
        tasks.append(("ground_state", {"q": q, "cutoff": c.cutoff}))
    tasks.append(("commutators", {"window": c.window, "cutoff": c.cutoff,
                                  "charge_window": c.charge_window, "deformed_q": c.deformed_q}))
    tasks.append(("sugawara", {"window": c.window, "cutoff": c.cutoff}))
    tasks.append(("vacuum_character", {"order": c.vacuum_order, "charge_window": c.charge_window}))
    for s in c.tower_spins:
        tasks.append(("tower", {"s": s, "order": c.tower_order}))
    for q in c.charge_zero_charges:
        tasks.append(("charge_zero_trace", {"q": q, "order": c.order}))
    for q1 in c.mixture_q1:
        for r in c.mixture_r:
            tasks.append(("mixture", {"q1": q1, "r": r}))
    if only:
        unknown = set(only) - set(CHECK_NAMES)
        if unknown:
            raise ValueError(f"unknown checks: {sorted(unknown)}")
        tasks = [t for t in tasks if t[0] in only]
    return tasks


def _run_task(task: tuple[str, dict], cocycle: str) -> CheckReport:
    name, kwargs = task
    with fock.use_cocycle(cocycle):
        try:
            return _CHECKS[name](**kwargs)
        except fock.CutoffExceeded as exc:
            return _skip(name, dict(kwargs), f"truncation margin violated: {exc}")
        except (ch.NotDecomposable, ch.ConsistencyError, ch.DomainError) as exc:
            return _fail(name, dict(kwargs), error=f"{type(exc).__name__}: {exc}")


def run_suite(config: SuiteConfig = SuiteConfig(), only: Optional[list[str]] = None,
              jobs: int = 1) -> list[CheckReport]:
    """Run every planned check; failures are collected, never raised.

    With ``jobs > 1`` checks run in worker processes; the report order is
    the plan order either way.
    """
    tasks = plan(config, only)
    cocycle = "alternating" if config.inject_fault else fock.get_cocycle()
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_task, tasks, [cocycle] * len(tasks)))
    return [_run_task(t, cocycle) for t in tasks]


def summarize(reports: list[CheckReport]) -> dict[str, int]:
    counts = {PASS: 0, FAIL: 0, SKIPPED: 0}
    for r in reports:
        counts[r.status] += 1
    return counts
