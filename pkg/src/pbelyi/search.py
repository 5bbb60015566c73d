"""Brute-force search for minimal-degree Belyi maps over tiny fields.

Candidates are reduced maps with monic denominator, enumerated in a fixed
order, and every hit is certified by the exact verifiers.  An exhaustive
run that finds nothing is a lower bound over the searched coefficient
fields only, never over the algebraic closure; the result record names
the fields so the caller cannot misread the claim.
"""

import multiprocessing
import random

from .constructions import BelyiInstance, _as_field
from .errors import GuardExceededError, InseparableMapError, PreconditionError
from .factor import DEFAULT_SEED
from .field import FiniteField, embed
from .poly import Polynomial
from .ramification import verify_tame_belyi, verify_wild_belyi
from .ratmap import RationalMap, parse_point, parse_ratmap

EXHAUSTIVE_GUARD = 10 ** 8
DEFAULT_BUDGET = 2000


def _poly_from_code(field, code):
    coeffs = []
    while code:
        code, r = divmod(code, field.q)
        coeffs.append(field.from_int_value(r))
    return Polynomial(field, coeffs)


def _monic_from_code(field, e, body):
    coeffs = []
    for _ in range(e):
        body, r = divmod(body, field.q)
        coeffs.append(field.from_int_value(r))
    coeffs.append(field.one)
    return Polynomial(field, coeffs)


def _map_key(f):
    return (f.den.sort_key(), f.num.sort_key())


def _triple_orbit(f):
    """Postcompositions of f by the six Mobius maps permuting {0, 1, inf}."""
    n, d = f.num, f.den
    return (
        f,
        RationalMap(d - n, d),
        RationalMap(d, n),
        RationalMap(d, d - n),
        RationalMap(n - d, n),
        RationalMap(n, n - d),
    )


def _is_orbit_representative(f):
    key = _map_key(f)
    return all(key <= _map_key(g) for g in _triple_orbit(f))


def enumerate_candidates(field, d, normalize=False):
    """Reduced maps of degree exactly d with monic denominator, fixed order.

    Order: denominator first by (degree, coefficient code), then numerator
    by coefficient code, little-endian base-q codes.  With normalize=True
    only the least member of each orbit under postcomposition with the six
    Mobius maps permuting {0, 1, inf} is kept.
    """
    field = _as_field(field)
    if not isinstance(d, int) or d < 1:
        raise PreconditionError("degree must be a positive integer, got %r" % (d,))
    q = field.q
    top = q ** (d + 1)
    for e in range(d + 1):
        start = q ** d if e < d else 1
        for body in range(q ** e):
            den = _monic_from_code(field, e, body)
            for code in range(start, top):
                f = RationalMap(_poly_from_code(field, code), den)
                if f.degree != d:
                    continue
                if normalize and not _is_orbit_representative(f):
                    continue
                yield f


class SearchSpec:
    """What to look for: an instance, tame or wild, a degree cap, and how."""

    def __init__(
        self,
        instance,
        kind,
        d_max,
        fields=None,
        mode="exhaustive",
        seed=None,
        budget=DEFAULT_BUDGET,
        normalize=False,
    ):
        if not isinstance(instance, BelyiInstance):
            raise PreconditionError("instance must be a BelyiInstance")
        if kind not in ("tame", "wild"):
            raise PreconditionError("kind must be 'tame' or 'wild', got %r" % (kind,))
        if not isinstance(d_max, int) or d_max < 1:
            raise PreconditionError("d_max must be a positive integer, got %r" % (d_max,))
        if mode not in ("exhaustive", "randomized"):
            raise PreconditionError("mode must be 'exhaustive' or 'randomized'")
        if not isinstance(budget, int) or budget < 1:
            raise PreconditionError("budget must be a positive integer")
        base = instance.field
        if fields is None:
            fields = (base, FiniteField(base.p, 2 * base.n))
        checked = []
        for E in fields:
            if not isinstance(E, FiniteField):
                raise PreconditionError("coefficient fields must be FiniteField instances")
            if E.p != base.p or E.n % base.n != 0:
                raise PreconditionError(f"{E} does not contain the instance field {base}")
            checked.append(E)
        if not checked:
            raise PreconditionError("need at least one coefficient field")
        self.instance = instance
        self.kind = kind
        self.d_max = d_max
        self.fields = tuple(checked)
        self.mode = mode
        self.seed = DEFAULT_SEED if seed is None else seed
        self.budget = budget
        self.normalize = normalize


def _check_guard(spec, cap):
    # the largest degree dominates, so checking d_max covers every round
    for E in spec.fields:
        work = E.q ** (2 * spec.d_max + 2)
        if work > cap:
            raise GuardExceededError(
                f"exhaustive search over {E} at degree {spec.d_max} considers about "
                f"{E.q}^{2 * spec.d_max + 2} = {work} pairs, over the cap "
                f"{cap}; use mode='randomized' with a budget instead"
            )


def _passes(f, kind, marked, avoided):
    try:
        if kind == "tame":
            return bool(verify_tame_belyi(f, marked, avoided, fast=True))
        return bool(verify_wild_belyi(f, marked, avoided, fast=True))
    except InseparableMapError:
        return False


def _scan_round(field, d, kind, marked, avoided, normalize):
    tested = 0
    for f in enumerate_candidates(field, d, normalize):
        tested += 1
        if _passes(f, kind, marked, avoided):
            return f, tested
    return None, tested


def _worker_scan(args):
    p, n, d, kind, marked_texts, avoided_texts, normalize, offset, step = args
    E = FiniteField(p, n)
    marked = tuple(parse_point(E, t) for t in marked_texts)
    avoided = tuple(parse_point(E, t) for t in avoided_texts)
    tested = 0
    for idx, f in enumerate(enumerate_candidates(E, d, normalize)):
        if idx % step != offset:
            continue
        tested += 1
        if _passes(f, kind, marked, avoided):
            return idx, str(f), tested
    return None, None, tested


def _scan_round_parallel(field, d, kind, marked, avoided, normalize, workers):
    args = [
        (
            field.p,
            field.n,
            d,
            kind,
            tuple(str(pt) for pt in marked),
            tuple(str(pt) for pt in avoided),
            normalize,
            w,
            workers,
        )
        for w in range(workers)
    ]
    with multiprocessing.Pool(workers) as pool:
        results = pool.map(_worker_scan, args)
    hits = [(idx, text) for idx, text, _ in results if idx is not None]
    if hits:
        idx, text = min(hits)
        # tested counts candidates up to the hit in stream order, so the
        # number does not depend on the worker count
        return parse_ratmap(field, text), idx + 1
    return None, sum(t for _, _, t in results)


def _random_candidate(field, d, rng):
    q = field.q
    while True:
        e = rng.randrange(d + 1)
        den = _monic_from_code(field, e, rng.randrange(q ** e))
        start = q ** d if e < d else 1
        f = RationalMap(_poly_from_code(field, rng.randrange(start, q ** (d + 1))), den)
        if f.degree == d:
            return f


def minimal_belyi_degree(spec: SearchSpec, workers: int = 1, guard: int = EXHAUSTIVE_GUARD) -> dict:
    """Scan degrees 1..d_max and return the first certified witness.

    Returns {degree, witness, exhausted, fields_searched, candidates_tested}.
    degree/witness are None when nothing passed; exhausted is True only for
    exhaustive runs, and then "None" certifies a lower bound over exactly
    the fields listed.
    """
    if not isinstance(spec, SearchSpec):
        raise PreconditionError("spec must be a SearchSpec")
    if not isinstance(workers, int) or workers < 1:
        raise PreconditionError("workers must be a positive integer")
    if spec.mode == "exhaustive":
        _check_guard(spec, guard)
    base = spec.instance.field
    rounds = []
    for E in spec.fields:
        eps = embed(base, E)
        marked = tuple(pt.embedded(eps) for pt in spec.instance.S)
        avoided = tuple(pt.embedded(eps) for pt in spec.instance.T)
        rounds.append((E, marked, avoided))
    rng = random.Random(spec.seed)
    tested_total = 0

    def record(degree, witness):
        return {
            "degree": degree,
            "witness": witness,
            "exhausted": spec.mode == "exhaustive",
            "fields_searched": [str(E) for E in spec.fields],
            "candidates_tested": tested_total,
        }

    for d in range(1, spec.d_max + 1):
        for E, marked, avoided in rounds:
            if spec.mode == "exhaustive":
                if workers == 1:
                    witness, tested = _scan_round(E, d, spec.kind, marked, avoided, spec.normalize)
                else:
                    witness, tested = _scan_round_parallel(
                        E, d, spec.kind, marked, avoided, spec.normalize, workers
                    )
                tested_total += tested
                if witness is not None:
                    return record(d, witness)
            else:
                for _ in range(spec.budget):
                    f = _random_candidate(E, d, rng)
                    tested_total += 1
                    if _passes(f, spec.kind, marked, avoided):
                        return record(d, f)
    return record(None, None)
