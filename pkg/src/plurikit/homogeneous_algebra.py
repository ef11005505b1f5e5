"""Projective points, sparse homogeneous polynomials, and normalized brackets.

The central quantity is the scale-invariant magnitude of a homogeneous
polynomial p of degree k at a projective point Z = [z],

    bracket(p, Z) = |p(z)|**(1/k) / |z|,

which is independent of the representative z and satisfies
bracket(p**m, Z) == bracket(p, Z).  Degree-0 polynomials use the bare
modulus.  All magnitudes are computed in log space (max-shifted term sums)
so that large degrees neither overflow nor underflow.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

POINT_TOL = 1e-12
DEFAULT_DEGREE_CAP = 256

_NEG_INF = float("-inf")


class ProjPoint:
    """A projective point stored as its canonical unit representative.

    The representative has Euclidean norm 1 and its first significant
    coordinate is real and positive, so equality of points reduces to
    (tolerant) equality of stored vectors.
    """

    __slots__ = ("coords",)

    def __init__(self, coords):
        v = np.asarray(coords, dtype=complex).ravel()
        if v.size < 2:
            raise DomainError("projective point needs at least 2 homogeneous coordinates")
        norm = float(np.linalg.norm(v))
        if not math.isfinite(norm) or norm == 0.0:
            raise DomainError("projective point must be a finite nonzero vector")
        v = v / norm
        pivot = int(np.argmax(np.abs(v) > 1e-12))
        phase = v[pivot] / abs(v[pivot])
        v = v * np.conj(phase)
        v[pivot] = abs(v[pivot])
        v.setflags(write=False)
        self.coords = v

    @classmethod
    def from_affine(cls, values) -> "ProjPoint":
        """Embed an affine point (z_1, ..., z_n) as [1 : z_1 : ... : z_n]."""
        vals = np.atleast_1d(np.asarray(values, dtype=complex))
        return cls(np.concatenate(([1.0 + 0.0j], vals)))

    @property
    def n(self) -> int:
        """Dimension of the ambient projective space."""
        return self.coords.size - 1

    @property
    def nvars(self) -> int:
        return self.coords.size

    def same_point(self, other: "ProjPoint", tol: float = POINT_TOL) -> bool:
        if self.coords.size != other.coords.size:
            return False
        overlap = abs(np.vdot(self.coords, other.coords))
        return bool(abs(overlap - 1.0) <= tol)

    def angle_to(self, other: "ProjPoint") -> float:
        """Fubini-Study angle between two points, in [0, pi/2]."""
        overlap = min(1.0, abs(np.vdot(self.coords, other.coords)))
        return math.acos(overlap)

    def dedup_key(self, digits: int = 9) -> tuple:
        return tuple(np.round(self.coords.view(float), digits))

    def __eq__(self, other):
        if not isinstance(other, ProjPoint):
            return NotImplemented
        return self.same_point(other)

    __hash__ = None

    def __repr__(self):
        inner = " : ".join(f"{c:.6g}" for c in self.coords)
        return f"ProjPoint([{inner}])"


def _validate_alpha(alpha, nvars, degree):
    if len(alpha) != nvars:
        raise DomainError(f"multi-index {alpha} has length {len(alpha)}, expected {nvars}")
    if any((not isinstance(a, (int, np.integer))) or a < 0 for a in alpha):
        raise DomainError(f"multi-index {alpha} must consist of nonnegative integers")
    if sum(alpha) != degree:
        raise DomainError(f"multi-index {alpha} has weight {sum(alpha)}, expected degree {degree}")


class HomoPoly:
    """Sparse homogeneous polynomial: a degree and a multi-index -> coefficient map.

    The zero polynomial is represented by an empty term map with degree -1.
    """

    __slots__ = ("nvars", "degree", "terms", "_cache")

    def __init__(self, nvars: int, degree: int, terms: dict):
        if nvars < 1:
            raise DomainError("polynomial needs at least one variable")
        cleaned = {}
        for alpha, coeff in terms.items():
            alpha = tuple(int(a) for a in alpha)
            coeff = complex(coeff)
            if coeff == 0:
                continue
            if not (math.isfinite(coeff.real) and math.isfinite(coeff.imag)):
                raise OverflowError(
                    "non-finite coefficient; degree/scale exceeds double precision"
                )
            _validate_alpha(alpha, nvars, degree)
            cleaned[alpha] = cleaned.get(alpha, 0.0 + 0.0j) + coeff
        cleaned = {a: c for a, c in cleaned.items() if c != 0}
        if not cleaned:
            degree = -1
        elif degree < 0:
            raise DomainError("nonzero polynomial cannot have negative degree")
        self.nvars = int(nvars)
        self.degree = int(degree)
        self.terms = cleaned
        self._cache = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "HomoPoly":
        return cls(nvars, -1, {})

    @classmethod
    def constant(cls, value: complex, nvars: int) -> "HomoPoly":
        return cls(nvars, 0, {(0,) * nvars: value})

    @classmethod
    def monomial(cls, nvars: int, alpha, coeff: complex = 1.0) -> "HomoPoly":
        alpha = tuple(int(a) for a in alpha)
        return cls(nvars, sum(alpha), {alpha: coeff})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "HomoPoly":
        alpha = [0] * nvars
        alpha[index] = 1
        return cls(nvars, 1, {tuple(alpha): 1.0})

    @classmethod
    def linear_form(cls, a) -> "HomoPoly":
        """The form y -> a . y (no conjugation)."""
        a = np.asarray(a, dtype=complex).ravel()
        terms = {}
        for i, c in enumerate(a):
            alpha = [0] * a.size
            alpha[i] = 1
            terms[tuple(alpha)] = c
        return cls(a.size, 1, terms)

    # -- basic queries -----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.degree < 0

    def _eval_arrays(self):
        if self._cache is None:
            alphas = np.array(sorted(self.terms), dtype=float).reshape(len(self.terms), self.nvars)
            coeffs = np.array([self.terms[tuple(int(x) for x in row)] for row in alphas])
            self._cache = (alphas, coeffs, np.log(np.abs(coeffs)), np.angle(coeffs))
        return self._cache

    def __call__(self, z) -> complex:
        """Direct evaluation; may over/underflow at extreme degree (use log_abs_at)."""
        if self.is_zero:
            return 0.0 + 0.0j
        z = np.asarray(z, dtype=complex).ravel()
        alphas, coeffs, _, _ = self._eval_arrays()
        with np.errstate(invalid="ignore"):
            monomials = np.prod(z[None, :] ** alphas, axis=1)
        return complex(np.sum(coeffs * monomials))

    def log_abs_at(self, z) -> float:
        """log |p(z)|, computed with a max-shift so nothing over/underflows."""
        if self.is_zero:
            return _NEG_INF
        z = np.asarray(z, dtype=complex).ravel()
        if z.size != self.nvars:
            raise DomainError("point dimension does not match polynomial")
        alphas, _, logmag, phases = self._eval_arrays()
        absz = np.abs(z)
        zero_mask = absz == 0.0
        keep = ~(alphas[:, zero_mask].sum(axis=1) > 0) if zero_mask.any() else slice(None)
        alphas = alphas[keep]
        if alphas.shape[0] == 0:
            return _NEG_INF
        logz = np.where(zero_mask, 0.0, np.log(np.where(zero_mask, 1.0, absz)))
        argz = np.angle(np.where(zero_mask, 1.0, z))
        lmag = logmag[keep] + alphas @ logz
        phase = phases[keep] + alphas @ argz
        shift = float(np.max(lmag))
        if shift == _NEG_INF:
            return _NEG_INF
        total = np.sum(np.exp(lmag - shift) * np.exp(1j * phase))
        mag = abs(total)
        if mag == 0.0:
            return _NEG_INF
        return shift + math.log(mag)

    def homogeneity_defect(self, z, lam) -> float:
        """Relative error of p(lam*z) == lam**degree * p(z); diagnostic."""
        lhs = self(np.asarray(z, dtype=complex) * lam)
        rhs = lam ** self.degree * self(z)
        scale = max(abs(lhs), abs(rhs), 1e-300)
        return abs(lhs - rhs) / scale

    # -- arithmetic --------------------------------------------------------

    def scaled(self, c: complex) -> "HomoPoly":
        if c == 0 or self.is_zero:
            return HomoPoly.zero(self.nvars)
        return HomoPoly(self.nvars, self.degree, {a: c * v for a, v in self.terms.items()})

    def __mul__(self, other: "HomoPoly") -> "HomoPoly":
        if not isinstance(other, HomoPoly):
            return NotImplemented
        if self.nvars != other.nvars:
            raise DomainError("variable-count mismatch in polynomial product")
        if self.is_zero or other.is_zero:
            return HomoPoly.zero(self.nvars)
        out: dict = {}
        for a1, c1 in self.terms.items():
            for a2, c2 in other.terms.items():
                key = tuple(x + y for x, y in zip(a1, a2))
                out[key] = out.get(key, 0.0 + 0.0j) + c1 * c2
        return HomoPoly(self.nvars, self.degree + other.degree, out)

    def __pow__(self, m: int) -> "HomoPoly":
        if m < 0:
            raise DomainError("negative polynomial power")
        result = HomoPoly.constant(1.0, self.nvars)
        base = self
        while m:
            if m & 1:
                result = result * base
            base = base * base if m > 1 else base
            m >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, HomoPoly):
            return NotImplemented
        return (self.nvars, self.degree, self.terms) == (other.nvars, other.degree, other.terms)

    __hash__ = None

    def __repr__(self):
        return f"HomoPoly(n={self.nvars - 1}, degree={self.degree}, terms={len(self.terms)})"


class ExpTailForm:
    """Degree-(m) homogeneous form whose restriction to the graph of exp is a
    Taylor tail.

    For y = (y0, y1, y2) the form is

        T_m(y) = y0**(m-1) * y2 - sum_{i<m} y0**(m-i) * y1**i / i!

    so that T_m(1, z, e**z) = e**z - sum_{i<m} z**i / i!, which is tiny on
    compact sets as m grows.  Evaluation is structural: the tail is summed
    directly as a series, which avoids the catastrophic cancellation that the
    expanded coefficient form suffers near the graph.
    """

    __slots__ = ("m",)

    nvars = 3

    def __init__(self, m: int):
        if m < 2:
            raise DomainError("tail form needs order >= 2")
        self.m = int(m)

    @property
    def degree(self) -> int:
        return self.m

    @property
    def is_zero(self) -> bool:
        return False

    @staticmethod
    def log_abs_tail(w: complex, m: int) -> float:
        """log |e**w - sum_{i<m} w**i/i!| via the convergent tail series."""
        if w == 0:
            return _NEG_INF
        # tail = sum_{i>=m} w^i/i! = (w^m/m!) * sum_{j>=0} w^j * m!/(m+j)!
        log_lead = m * math.log(abs(w)) - math.lgamma(m + 1)
        acc = 1.0 + 0.0j
        term = 1.0 + 0.0j
        for j in range(1, 4000):
            term = term * w / (m + j)
            acc += term
            if abs(term) <= 1e-20 * max(abs(acc), 1e-30):
                break
        if acc == 0:
            return _NEG_INF
        return log_lead + math.log(abs(acc))

    def log_abs_at(self, z) -> float:
        z = np.asarray(z, dtype=complex).ravel()
        if z.size != 3:
            raise DomainError("tail form lives in 3 homogeneous variables")
        y0, y1, y2 = complex(z[0]), complex(z[1]), complex(z[2])
        m = self.m
        if y0 == 0:
            # every monomial carries a positive power of y0
            return _NEG_INF
        w = y1 / y0
        v = y2 / y0
        if abs(w) > 700.0:
            raise DomainError("tail form evaluation out of range (|y1/y0| too large)")
        # T_m / y0^m = v - trunc(w) = (v - e^w) + tail(w); both parts stable.
        ew = cmath.exp(w)
        head = v - ew
        # below the cancellation floor the point is on the graph to machine
        # precision and the difference is exactly the tail
        if abs(head) <= 1e-13 * (abs(v) + abs(ew)):
            head = 0.0
        log_tail = self.log_abs_tail(w, m)
        log_head = math.log(abs(head)) if head != 0 else _NEG_INF
        base_log = m * math.log(abs(y0))
        if log_tail == _NEG_INF and log_head == _NEG_INF:
            return _NEG_INF
        if log_tail < log_head - 50.0:
            return base_log + log_head
        if log_head < log_tail - 50.0:
            return base_log + log_tail
        # comparable magnitudes: combine with the tail's phase, shifted
        shift = max(log_head, log_tail)
        parts = 0.0 + 0.0j
        if log_head > _NEG_INF:
            parts += head * math.exp(-shift)
        if log_tail > _NEG_INF:
            parts += math.exp(log_tail - shift) * self._tail_phase(w, m)
        if parts == 0:
            return _NEG_INF
        return base_log + shift + math.log(abs(parts))

    @staticmethod
    def _tail_phase(w: complex, m: int) -> complex:
        acc = 1.0 + 0.0j
        term = 1.0 + 0.0j
        for j in range(1, 4000):
            term = term * w / (m + j)
            acc += term
            if abs(term) <= 1e-20 * max(abs(acc), 1e-30):
                break
        lead = (w / abs(w)) ** m
        total = lead * acc
        mag = abs(total)
        return total / mag if mag > 0 else 1.0 + 0.0j

    def expand(self) -> HomoPoly:
        m = self.m
        terms = {(m - 1, 0, 1): 1.0 + 0.0j}
        for i in range(m):
            terms[(m - i, i, 0)] = terms.get((m - i, i, 0), 0.0) - 1.0 / math.gamma(i + 1)
        return HomoPoly(3, m, terms)

    def sup_upper_bound(self) -> float:
        """Certified bound on sup_{|y|=1} |T_m(y)| (triangle inequality)."""
        return 1.0 + math.e

    def __repr__(self):
        return f"ExpTailForm(m={self.m})"


class PolyProduct:
    """Factored homogeneous polynomial: exp(log_scale + i*phase) * prod f_i**m_i.

    High-degree certificates are kept in this form because expanded
    coefficient evaluation of products loses all precision to cancellation,
    while the factored log-magnitude evaluation is stable at any degree.
    """

    __slots__ = ("nvars", "factors", "log_scale", "phase")

    def __init__(self, nvars: int, factors, log_scale: float = 0.0, phase: float = 0.0):
        flat = []
        for base, power in factors:
            power = int(power)
            if power < 0:
                raise DomainError("negative factor power")
            if power == 0:
                continue
            if base.nvars != nvars:
                raise DomainError("factor variable-count mismatch")
            if base.is_zero:
                raise DomainError("zero factor in polynomial product")
            if isinstance(base, PolyProduct):
                log_scale += power * base.log_scale
                phase += power * base.phase
                for b, p in base.factors:
                    flat.append((b, p * power))
            else:
                flat.append((base, power))
        self.nvars = int(nvars)
        self.factors = tuple(flat)
        self.log_scale = float(log_scale)
        self.phase = float(phase)

    @property
    def degree(self) -> int:
        return sum(b.degree * p for b, p in self.factors)

    @property
    def is_zero(self) -> bool:
        return False

    def log_abs_at(self, z) -> float:
        total = self.log_scale
        for base, power in self.factors:
            la = base.log_abs_at(z)
            if la == _NEG_INF:
                return _NEG_INF
            total += power * la
        return total

    def __call__(self, z) -> complex:
        la = self.log_abs_at(z)
        if la == _NEG_INF:
            return 0.0 + 0.0j
        ph = self.phase
        for base, power in self.factors:
            val = base(z) if isinstance(base, HomoPoly) else None
            if val is None:
                raise DomainError("direct evaluation unsupported for this factor type")
            ph += power * cmath.phase(val)
        return cmath.rect(math.exp(la), ph) if la < 700 else cmath.rect(math.inf, ph)

    def scaled_pow(self, m: int) -> "PolyProduct":
        return PolyProduct(
            self.nvars,
            [(b, p * m) for b, p in self.factors],
            self.log_scale * m,
            self.phase * m,
        )

    def expand(self, max_degree: int = DEFAULT_DEGREE_CAP) -> HomoPoly:
        """Expanded sparse form; refuse beyond max_degree (conditioning)."""
        if self.degree > max_degree:
            raise DomainError(
                f"refusing to expand degree {self.degree} product (limit {max_degree})"
            )
        result = HomoPoly.constant(cmath.rect(math.exp(self.log_scale), self.phase), self.nvars)
        for base, power in self.factors:
            b = base if isinstance(base, HomoPoly) else base.expand()
            result = result * b ** power
        return result

    def __repr__(self):
        fs = ", ".join(f"{b!r}^{p}" for b, p in self.factors)
        return f"PolyProduct(deg={self.degree}, scale=e^{self.log_scale:.3g}, [{fs}])"


@dataclass(frozen=True)
class NormReport:
    """Norm measurements for a homogeneous polynomial.

    Sampled values are lower bounds of the true sup; analytic values are
    certified upper bounds (exact for powers of a single linear form).
    """

    global_sup: float | None
    set_sup: float | None
    point_value: float | None
    method: str


def bracket(p, Z: ProjPoint) -> float:
    """Normalized magnitude |p(z)|**(1/deg p) / |z| at the canonical z."""
    if p.is_zero:
        raise DomainError("bracket undefined for zero polynomial")
    if p.degree == 0:
        if isinstance(p, HomoPoly):
            return abs(next(iter(p.terms.values())))
        return math.exp(p.log_scale)
    la = p.log_abs_at(Z.coords)
    if la == _NEG_INF:
        return 0.0
    return math.exp(la / p.degree)


def bracket_many(p, points) -> np.ndarray:
    return np.array([bracket(p, Z) for Z in points])


def sup_bracket_over_set(p, samples) -> NormReport:
    """Sampled estimate of the bracket sup over a finite point set."""
    samples = list(samples)
    if not samples:
        raise DomainError("sup over empty sample set")
    vals = bracket_many(p, samples)
    return NormReport(global_sup=None, set_sup=float(np.max(vals)), point_value=None,
                      method="sampled")


def analytic_sup_linear_power(a, d: int) -> float:
    """Exact bracket sup of (a . y)**d, namely ||a||_2.

    Cauchy-Schwarz gives |a . y| <= ||a|| |y| with equality at y = conj(a),
    and the bracket of a d-th power equals the bracket of the base.  Products
    of powers of linear forms inherit the certified bound
    prod ||a_i||**(m_i/D) by the weighted geometric mean of the factors.
    """
    a = np.asarray(a, dtype=complex).ravel()
    norm = float(np.linalg.norm(a))
    if norm == 0.0:
        raise DomainError("zero coefficient vector")
    if d < 1:
        raise DomainError("exponent must be >= 1")
    return norm


def certified_sup_bound(p) -> tuple[float, str]:
    """(upper bound for the bracket sup over projective space, method tag).

    Linear-form products get the geometric-mean Cauchy-Schwarz bound; other
    factors fall back to a coefficient/triangle-inequality bound.  Both are
    true upper bounds; "analytic" means certified.
    """
    if p.is_zero:
        raise DomainError("zero polynomial has no bracket sup")
    if isinstance(p, HomoPoly):
        if p.degree == 0:
            return abs(next(iter(p.terms.values()))), "analytic"
        return _homopoly_sup_bound(p), "analytic"
    log_total = p.log_scale
    deg = p.degree
    if deg == 0:
        return math.exp(log_total), "analytic"
    for base, power in p.factors:
        if isinstance(base, HomoPoly) and base.degree == 0:
            log_total += power * math.log(abs(next(iter(base.terms.values()))))
        elif isinstance(base, HomoPoly) and base.degree == 1:
            a = np.zeros(base.nvars, dtype=complex)
            for alpha, c in base.terms.items():
                a[alpha.index(1)] = c
            log_total += power * math.log(float(np.linalg.norm(a)))
        elif isinstance(base, ExpTailForm):
            log_total += power * math.log(base.sup_upper_bound())
        elif isinstance(base, HomoPoly):
            log_total += power * base.degree * math.log(_homopoly_sup_bound(base))
        else:
            raise DomainError("unsupported factor type for certified bound")
    return math.exp(log_total / deg), "analytic"


def _homopoly_sup_bound(p: HomoPoly) -> float:
    """sup_{|y|=1} |p(y)|**(1/deg) <= (sum |c_a| max|y^a|)**(1/deg) via AM-GM."""
    d = p.degree
    total = 0.0
    for alpha, c in p.terms.items():
        log_mono = 0.0
        for a in alpha:
            if a:
                log_mono += 0.5 * a * math.log(a / d)
        total += abs(c) * math.exp(log_mono)
    return total ** (1.0 / d)


def q_gadget(X: ProjPoint, k: int, d: int) -> HomoPoly:
    """Expanded peak polynomial (k * y . conj(x)/|x|)**d at the unit x of X.

    Its bracket sup equals k, attained at X itself.
    """
    if k < 1 or d < 1:
        raise DomainError("q_gadget needs k >= 1 and d >= 1")
    base = gadget_form(X, k)
    terms: dict = {}
    coeffs = {alpha.index(1): c for alpha, c in base.terms.items()}
    nv = X.nvars

    def rec(idx, remaining, alpha, log_c, phase):
        if idx == nv - 1:
            alpha = alpha + (remaining,)
            c = coeffs.get(nv - 1, 0.0)
            if remaining and c == 0.0:
                return
            lc = log_c + (remaining * math.log(abs(c)) if remaining else 0.0)
            ph = phase + (remaining * cmath.phase(c) if remaining else 0.0)
            lc += math.lgamma(d + 1) - sum(math.lgamma(a + 1) for a in alpha)
            terms[alpha] = terms.get(alpha, 0.0) + cmath.rect(math.exp(lc), ph)
            return
        c = coeffs.get(idx, 0.0)
        max_a = remaining if c != 0.0 else 0
        for a in range(max_a + 1):
            rec(idx + 1, remaining - a,
                alpha + (a,),
                log_c + (a * math.log(abs(c)) if a else 0.0),
                phase + (a * cmath.phase(c) if a else 0.0))

    rec(0, d, (), 0.0, 0.0)
    return HomoPoly(nv, d, terms)


def gadget_form(X: ProjPoint, k: int) -> HomoPoly:
    """Degree-1 base of the peak gadget: y -> k * (y . conj(x)) at unit x."""
    if k < 1:
        raise DomainError("gadget needs k >= 1")
    return HomoPoly.linear_form(k * np.conj(X.coords))


def interpolate_h(p, q, a: int, b: int) -> PolyProduct:
    """Geometric interpolation h = p**a * q**(b-a) for coprime a < b.

    The bracket of h at every point is the beta-weighted geometric mean of
    the factor brackets with beta = a/b.  The result stays factored; use
    .expand() for the sparse coefficient form when the degree is small.
    """
    if a >= b:
        raise DomainError("interpolation needs a < b")
    if a < 1:
        raise DomainError("interpolation needs a >= 1")
    if math.gcd(a, b) != 1:
        raise DomainError("interpolation exponents must be coprime")
    if p.is_zero or q.is_zero:
        raise DomainError("interpolation of zero polynomial")
    if p.degree != q.degree:
        raise DomainError(f"degree mismatch: {p.degree} != {q.degree}")
    return PolyProduct(p.nvars, [(p, a), (q, b - a)])


# -- serialization ----------------------------------------------------------

def homopoly_to_jsonl(p: HomoPoly) -> str:
    lines = [json.dumps({"n": p.nvars - 1, "degree": p.degree}, sort_keys=True)]
    for alpha in sorted(p.terms):
        c = p.terms[alpha]
        lines.append(json.dumps({"alpha": list(alpha), "re": c.real, "im": c.imag},
                                sort_keys=True))
    return "\n".join(lines) + "\n"


def homopoly_from_jsonl(text: str) -> HomoPoly:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise DomainError("empty polynomial record")
    header = json.loads(lines[0])
    nvars = int(header["n"]) + 1
    degree = int(header["degree"])
    terms = {}
    for ln in lines[1:]:
        rec = json.loads(ln)
        terms[tuple(rec["alpha"])] = complex(rec["re"], rec["im"])
    return HomoPoly(nvars, degree if terms else -1, terms)


def projpoint_to_json(Z: ProjPoint) -> str:
    return json.dumps([[c.real, c.imag] for c in Z.coords])


def projpoint_from_json(text) -> ProjPoint:
    data = json.loads(text) if isinstance(text, str) else text
    coords = []
    for entry in data:
        if isinstance(entry, (list, tuple)):
            coords.append(complex(entry[0], entry[1] if len(entry) > 1 else 0.0))
        else:
            coords.append(complex(entry))
    return ProjPoint(coords)


def random_unit_points(rng: np.random.Generator, count: int, nvars: int) -> list:
    """Seeded quasi-random projective points (complex-normal directions)."""
    raw = rng.normal(size=(count, nvars)) + 1j * rng.normal(size=(count, nvars))
    return [ProjPoint(row) for row in raw]
