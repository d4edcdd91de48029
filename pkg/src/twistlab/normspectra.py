"""Reduced-norm and spectral-radius numerics.

Exact machinery for finite groups (sigma-regular representation, operator
norms, spectra), certified truncated lower bounds and Haagerup-type upper
bounds for free groups, l2 spectral-radius sequences, the untwisted-to-twisted
norm-transfer check, and free-subsemigroup certification.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import linalg
from .algebra import AlgebraElement, convolve, delta, involute, is_normal, l2_norm, power
from .cocycles import Cocycle, TrivialCocycle
from .errors import MemoryBudgetExceeded, Unsupported
from .groups import Group

DEFAULT_MEM_CAP = 2_000_000


@dataclass
class NormEstimate:
    lower: float
    upper: float
    lower_method: str
    upper_method: str
    metadata: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "lower": self.lower,
            "upper": self.upper,
            "lower_method": self.lower_method,
            "upper_method": self.upper_method,
            "metadata": self.metadata,
        }


@dataclass
class SpectralReport:
    r2_sequence: list
    r2_at_max_power: float
    r_sigma: float | None
    normal: bool
    metadata: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "r2_sequence": self.r2_sequence,
            "r2_at_max_power": self.r2_at_max_power,
            "r_sigma": self.r_sigma,
            "normal": self.normal,
            "metadata": self.metadata,
        }


def _require_finite(G: Group):
    if not G.is_finite:
        raise Unsupported(f"{G.kind} backend is not finite")


def regular_rep(G: Group, sigma: Cocycle, a: AlgebraElement) -> np.ndarray:
    """Matrix of left twisted convolution by a on l2(G), element enumeration
    basis: column h carries sigma(g, h) a_g at row gh."""
    _require_finite(G)
    a.group.check_same(G)
    elems = G.elements()
    index = {g: i for i, g in enumerate(elems)}
    n = len(elems)
    m = np.zeros((n, n), dtype=complex)
    for g in a.support():
        c = a.coeffs[g]
        for j, h in enumerate(elems):
            m[index[G.compose(g, h)], j] += sigma.evaluate(g, h) * c
    return m


def exact_norm(G: Group, sigma: Cocycle, a: AlgebraElement) -> float:
    return linalg.operator_norm(regular_rep(G, sigma, a))


def _ball_with_index(G, r, cap):
    ball = G.enumerate_ball(r)
    if len(ball) > cap:
        raise MemoryBudgetExceeded(len(ball), cap)
    return ball, {g: i for i, g in enumerate(ball)}


def _truncation_matrix(G, sigma, a, r, cap):
    """Sparse matrix of b -> a *_sigma b from l2(B_r) to l2(B_{r + diam})."""
    supp = a.support()
    if not supp:
        return None, 0, 0
    d = max(G.word_length(g) for g in supp)
    dom, _ = _ball_with_index(G, r, cap)
    cod, cod_index = _ball_with_index(G, r + d, cap)
    rows, cols, data = [], [], []
    for g in supp:
        c = a.coeffs[g]
        for j, b in enumerate(dom):
            rows.append(cod_index[G.compose(g, b)])
            cols.append(j)
            data.append(sigma.evaluate(g, b) * c)
    T = sp.csr_matrix((data, (rows, cols)), shape=(len(cod), len(dom)), dtype=complex)
    return T, len(dom), len(cod)


def _top_singular_sparse(T) -> float:
    """Largest singular value of a sparse matrix, deterministic start vector."""
    n = T.shape[1]
    if n == 0:
        return 0.0
    Th = T.conj().T.tocsr()
    v0 = np.ones(n) / np.sqrt(n)
    if n < 3:
        dense = T.toarray()
        return linalg.operator_norm(dense)

    def matvec(v):
        return Th @ (T @ v)

    op = spla.LinearOperator((n, n), matvec=matvec, dtype=complex)
    try:
        w = spla.eigsh(op, k=1, which="LA", v0=v0, maxiter=50_000, tol=1e-13,
                       return_eigenvectors=False)
        return float(np.sqrt(max(w[0].real, 0.0)))
    except spla.ArpackNoConvergence:
        lam = 0.0
        v = v0.astype(complex)
        for _ in range(200_000):
            w_ = matvec(v)
            nw = np.linalg.norm(w_)
            if nw == 0.0:
                return 0.0
            v = w_ / nw
            new = float(np.real(np.vdot(v, matvec(v))))
            if abs(new - lam) <= 1e-14 * max(abs(new), 1.0):
                lam = new
                break
            lam = new
        return float(np.sqrt(max(lam, 0.0)))


def truncated_norm_lower(G: Group, sigma: Cocycle, a: AlgebraElement, r: int,
                         mem_cap: int = DEFAULT_MEM_CAP) -> float:
    """Certified lower bound for the reduced twisted norm: the operator norm
    of b -> a *_sigma b restricted to l2(B_r), codomain B_{r + diam supp a}.

    Monotone nondecreasing in r; equals the exact norm on finite backends."""
    a.group.check_same(G)
    if G.is_finite:
        return exact_norm(G, sigma, a)
    if not a.coeffs:
        return 0.0
    T, ndom, ncod = _truncation_matrix(G, sigma, a, r, mem_cap)
    return _top_singular_sparse(T)


def haagerup_upper(G: Group, a: AlgebraElement) -> float:
    """Free-group upper bound sum_n (n + 1) ||a_n||_2 over sphere restrictions.

    Valid for the untwisted norm and, by the norm-transfer principle applied
    sphere by sphere, for every twisted norm as well."""
    if G.kind != "free":
        raise Unsupported("haagerup_upper needs a free group")
    a.group.check_same(G)
    by_len = {}
    for g, c in a.coeffs.items():
        by_len.setdefault(len(g), []).append(abs(c) ** 2)
    total = 0.0
    for n in sorted(by_len):
        total += (n + 1) * np.sqrt(sum(sorted(by_len[n])))
    return float(total)


@dataclass
class TransferReport:
    constant: float
    untwisted_ratios_max: float
    per_sigma_max_ratio: list
    passed: bool
    sample_size: int
    seed: int
    tol: float

    def to_json(self):
        return {
            "constant": self.constant,
            "untwisted_ratios_max": self.untwisted_ratios_max,
            "per_sigma_max_ratio": self.per_sigma_max_ratio,
            "passed": self.passed,
            "sample_size": self.sample_size,
            "seed": self.seed,
            "tol": self.tol,
        }


def transfer_check(G: Group, S, sigmas, seed: int = 0, n_random: int = 50,
                   tol: float = 1e-9) -> TransferReport:
    """Sampled check of the untwisted-to-twisted norm transfer on supp in S.

    C is the max untwisted ratio ||a|| / ||a||_2 over the sample (all-ones on
    S, every delta, and seeded random complex elements); the same sample is
    then tested against every twisted norm."""
    _require_finite(G)
    S = sorted(set(S), key=G.sort_key)
    if not S:
        raise ValueError("S must be nonempty")
    rng = np.random.default_rng(seed)
    sample = [AlgebraElement(G, {g: 1.0 for g in S})]
    sample.extend(delta(G, g) for g in S)
    for _ in range(n_random):
        sample.append(AlgebraElement(
            G, {g: complex(rng.standard_normal(), rng.standard_normal()) for g in S}))

    trivial = TrivialCocycle(G)
    C = 0.0
    for a in sample:
        C = max(C, exact_norm(G, trivial, a) / l2_norm(a))
    per_sigma = []
    ok = True
    for sigma in sigmas:
        worst = 0.0
        for a in sample:
            worst = max(worst, exact_norm(G, sigma, a) / l2_norm(a))
        per_sigma.append(worst)
        if worst > C + tol:
            ok = False
    return TransferReport(C, C, per_sigma, ok, len(sample), seed, tol)


def l2_spectral_radius(a: AlgebraElement, sigma: Cocycle | None, N: int,
                       mem_cap: int = DEFAULT_MEM_CAP) -> SpectralReport:
    """The sequence n -> ||a^n||_2^(1/n) for n = 1..N with twisted powers.

    The last entry is the working estimate; no extrapolation is asserted."""
    if N < 1:
        raise ValueError("N must be >= 1")
    G = a.group
    seq = []
    p = a
    for n in range(1, N + 1):
        if n > 1:
            p = convolve(p, a, sigma)
        if len(p) > mem_cap:
            raise MemoryBudgetExceeded(len(p), mem_cap)
        seq.append(float(l2_norm(p) ** (1.0 / n)))
    r_sigma = None
    if G.is_finite:
        sig = sigma if sigma is not None else TrivialCocycle(G)
        spec = exact_spectrum(G, sig, a)
        r_sigma = float(max(abs(z) for z in spec))
    return SpectralReport(seq, seq[-1], r_sigma, is_normal(a, sigma),
                          {"max_power": N})


def _cluster(vals, gap):
    clusters = []
    start = 0
    for i in range(1, len(vals) + 1):
        if i == len(vals) or vals[i] - vals[i - 1] > gap:
            clusters.append((start, i))
            start = i
    return clusters


def exact_spectrum(G: Group, sigma: Cocycle, a: AlgebraElement):
    """Eigenvalue multiset of the sigma-regular representation of a.

    Normal elements go through Hermitian machinery (simultaneous
    diagonalisation of the real and imaginary parts); other elements fall back
    to power iteration with Householder deflation on the dense matrix."""
    _require_finite(G)
    M = regular_rep(G, sigma, a)
    n = M.shape[0]
    if is_normal(a, sigma):
        H = 0.5 * (M + M.conj().T)
        S = (M - M.conj().T) / 2j
        wh, V = linalg.hermitian_eigen(H, tol=1e-8)
        scale = max(np.max(np.abs(wh)), 1.0) if n else 1.0
        out = []
        for lo, hi in _cluster(list(wh), 1e-8 * scale):
            Vc = V[:, lo:hi]
            Sc = Vc.conj().T @ S @ Vc
            Sc = 0.5 * (Sc + Sc.conj().T)
            ws, _ = linalg.hermitian_eigen(Sc, tol=1e-6)
            mid = float(np.mean(wh[lo:hi]))
            out.extend(complex(mid, w) for w in ws)
        out.sort(key=lambda z: (z.real, z.imag))
        return out
    return _eigenvalues_by_deflation(M)


def _eigenvalues_by_deflation(M, iters: int = 2000):
    """Best-effort dense spectrum: dominant eigenpair by power iteration, then
    a Householder similarity pushes it to the top-left corner and the trailing
    block recurses.  Adequate for generic small matrices."""
    M = np.array(M, dtype=complex)
    n = M.shape[0]
    out = []
    rng = np.random.default_rng(0xDEF1)
    while n > 1:
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        v /= np.linalg.norm(v)
        lam = 0.0 + 0.0j
        for _ in range(iters):
            w = M @ v
            nw = np.linalg.norm(w)
            if nw == 0.0:
                break
            v = w / nw
            new = complex(np.vdot(v, M @ v))
            if abs(new - lam) <= 1e-13 * max(abs(new), 1.0):
                lam = new
                break
            lam = new
        out.append(lam)
        # Householder u maps v to e1; deflate to the trailing (n-1) block
        e1 = np.zeros(n, dtype=complex)
        e1[0] = 1.0
        phase = v[0] / abs(v[0]) if abs(v[0]) > 0 else 1.0
        u = v + phase * np.linalg.norm(v) * e1
        u /= max(np.linalg.norm(u), 1e-300)
        Hh = np.eye(n, dtype=complex) - 2.0 * np.outer(u, u.conj())
        M = (Hh @ M @ Hh)[1:, 1:]
        n -= 1
    if n == 1:
        out.append(complex(M[0, 0]))
    out.sort(key=lambda z: (z.real, z.imag))
    return out


def spectral_radius_exact(G: Group, sigma: Cocycle, a: AlgebraElement) -> float:
    return float(max(abs(z) for z in exact_spectrum(G, sigma, a)))


@dataclass
class SemigroupCertificate:
    certified: bool
    length: int
    products_checked: int
    collision: dict | None

    def to_json(self):
        return {
            "certified": self.certified,
            "length": self.length,
            "products_checked": self.products_checked,
            "collision": self.collision,
        }


def certify_free_subsemigroup(G: Group, t, F, L: int,
                              mem_cap: int = DEFAULT_MEM_CAP) -> SemigroupCertificate:
    """Check that distinct sequences over the generators {t f : f in F} of
    length <= L multiply to distinct group elements.

    A pass is a bounded-length freeness certificate, not a proof of freeness;
    a failure returns the first colliding pair of sequences."""
    if L < 1:
        raise ValueError("L must be >= 1")
    F = sorted(set(F), key=G.sort_key)
    if not F:
        raise ValueError("F must be nonempty")
    gens = [G.compose(t, f) for f in F]
    seen = {}
    frontier = [((), G.identity())]
    checked = 0
    for _ in range(L):
        nxt = []
        for seq, g in frontier:
            for i, h in enumerate(gens):
                seq2 = seq + (i,)
                g2 = G.compose(g, h)
                checked += 1
                if checked > mem_cap:
                    raise MemoryBudgetExceeded(checked, mem_cap)
                if g2 in seen:
                    other = seen[g2]
                    return SemigroupCertificate(False, L, checked, {
                        "sequence_a": list(other),
                        "sequence_b": list(seq2),
                        "element": G.element_to_json(g2),
                    })
                seen[g2] = seq2
                nxt.append((seq2, g2))
        frontier = nxt
    return SemigroupCertificate(True, L, checked, None)


@dataclass
class CriterionConfig:
    seed: int = 0
    n_elements: int = 3
    max_power: int = 12
    radius: int = 8
    length: int = 8
    mem_cap: int = DEFAULT_MEM_CAP


def criterion_report(G: Group, sigma: Cocycle | None, t, F,
                     config: CriterionConfig | None = None) -> dict:
    """Numeric evidence bundle for the spectral-radius criterion on elements
    supported on tF: free-subsemigroup certificate, r2 sequences, truncated
    norm bounds (an upper proxy for the spectral radius), and, for coboundary
    twists, the gauge-transported untwisted data.  Claims no equality."""
    if G.kind != "free":
        raise Unsupported("criterion_report supports free backends only")
    cfg = config or CriterionConfig()
    from .cocycles import CoboundaryCocycle
    from .fixtures import random_element

    cert = certify_free_subsemigroup(G, t, F, cfg.length, cfg.mem_cap)
    tF = sorted((G.compose(t, f) for f in sorted(set(F), key=G.sort_key)), key=G.sort_key)
    elements = [AlgebraElement(G, {g: 1.0 for g in tF})]
    for i in range(cfg.n_elements):
        elements.append(random_element(G, tF, cfg.seed + i))

    runs = []
    for a in elements:
        rep = l2_spectral_radius(a, sigma, cfg.max_power, cfg.mem_cap)
        norm_lower = truncated_norm_lower(G, sigma or TrivialCocycle(G), a,
                                          cfg.radius, cfg.mem_cap)
        upper = haagerup_upper(G, a)
        run = {
            "element": a.to_json()["terms"],
            "r2_sequence": rep.r2_sequence,
            "r2_estimate": rep.r2_at_max_power,
            "norm_lower_truncated": norm_lower,
            "norm_upper_haagerup": upper,
            "gap_r2_vs_norm_lower": norm_lower - rep.r2_at_max_power,
        }
        if isinstance(sigma, CoboundaryCocycle):
            from .algebra import gauge
            a0 = gauge(a, lambda g: np.conj(sigma.beta(g)))
            rep0 = l2_spectral_radius(a0, None, cfg.max_power, cfg.mem_cap)
            run["untwisted_gauge_transport"] = {
                "r2_sequence": rep0.r2_sequence,
                "norm_lower_truncated": truncated_norm_lower(
                    G, TrivialCocycle(G), a0, cfg.radius, cfg.mem_cap),
            }
        runs.append(run)
    return {
        "free_subsemigroup": cert.to_json(),
        "generators": [G.element_to_json(g) for g in tF],
        "runs": runs,
        "config": {
            "seed": cfg.seed,
            "max_power": cfg.max_power,
            "radius": cfg.radius,
            "length": cfg.length,
        },
        "note": "r2 values are estimates at the stated power; no limit is asserted",
    }
