"""Dense complex linear-operator core: Hermitian/density/unitary types,
eigendecomposition, norms, tensor structure, partial trace, and seeded
random ensembles.

Kronecker ordering is fixed system-major throughout the package:
``tensor(X_S, Y_E)`` indexes the composite basis as ``i_S * dim_E + i_E``.
"""

from __future__ import annotations

import numpy as np

HERMITICITY_TOL = 1e-12
UNITARITY_TOL = 1e-10
TRACE_TOL = 1e-10
EIG_CLAMP_LIMIT = 1e-8


class ValidationError(ValueError):
    """An operator failed one of its type invariants."""


class DimensionMismatchError(ValueError):
    """Operands have incompatible dimensions."""


def _as_complex_matrix(entries) -> np.ndarray:
    m = np.array(entries, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {m.shape}")
    return m


def _check_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL, what: str = "matrix"):
    resid = np.abs(m - m.conj().T)
    worst = np.unravel_index(int(np.argmax(resid)), resid.shape)
    if resid[worst] > tol:
        raise ValidationError(
            f"{what} is not Hermitian: entry {worst} violates by "
            f"{resid[worst]:.3e} (tolerance {tol:.0e})"
        )


class HermitianOperator:
    """Complex square matrix asserted Hermitian entrywise within 1e-12."""

    __slots__ = ("dim", "entries")

    def __init__(self, entries):
        m = _as_complex_matrix(entries)
        _check_hermitian(m)
        m.setflags(write=False)
        self.dim = m.shape[0]
        self.entries = m

    def __repr__(self):
        return f"HermitianOperator(dim={self.dim})"


class DensityMatrix:
    """Hermitian, PSD, unit-trace matrix with its eigendecomposition cached.

    Eigenvalues are ascending; tiny negative eigenvalues from roundoff are
    clamped to 0 and the spectrum renormalized.  Clamping beyond 1e-8 is an
    error rather than a repair.
    """

    __slots__ = ("dim", "entries", "eigenvalues", "eigenvectors")

    def __init__(self, entries):
        m = _as_complex_matrix(entries)
        _check_hermitian(m, what="density matrix")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValidationError(f"density matrix trace {tr!r} is not 1 within {TRACE_TOL:.0e}")
        p, v = np.linalg.eigh(m)
        if p[0] < -EIG_CLAMP_LIMIT:
            raise ValidationError(
                f"density matrix has eigenvalue {p[0]:.3e} below -{EIG_CLAMP_LIMIT:.0e}"
            )
        p = np.clip(p, 0.0, None)
        p = p / p.sum()
        self._store(m, p, v)

    def _store(self, m, p, v):
        for a in (m, p, v):
            a.setflags(write=False)
        self.dim = m.shape[0]
        self.entries = m
        self.eigenvalues = p
        self.eigenvectors = v

    @classmethod
    def from_pure(cls, psi) -> "DensityMatrix":
        """Rank-one density matrix |psi><psi| with an exact spectral cache.

        The eigenbasis is completed by a Householder reflection, so no O(n^3)
        eigensolve is performed; intended for large pointer states.
        """
        psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
        n = psi.size
        nrm = np.linalg.norm(psi)
        if abs(nrm - 1.0) > UNITARITY_TOL:
            raise ValidationError(f"pure-state vector norm {nrm!r} is not 1")
        psi = psi / nrm
        v = _householder_basis(psi)
        p = np.zeros(n)
        p[-1] = 1.0
        self = cls.__new__(cls)
        self._store(np.outer(psi, psi.conj()), p, v)
        return self

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim})"


def _householder_basis(psi: np.ndarray) -> np.ndarray:
    """Unitary matrix whose last column is the unit vector psi."""
    n = psi.size
    last = psi[-1]
    phase = last / abs(last) if abs(last) > 0 else 1.0
    u = psi.copy()
    u[-1] += phase
    h = np.eye(n, dtype=np.complex128) - (2.0 / np.vdot(u, u)) * np.outer(u, u.conj())
    # H psi = -phase * e_last, so the last column of H is -conj(phase)^(-1)... fix by scaling:
    h[:, -1] *= -phase
    return h


class UnitaryOperator:
    """Square matrix with U†U = 1 within 1e-10 in Frobenius norm.

    ``residual`` may be supplied by constructors that certify unitarity
    structurally (e.g. permutations, Kronecker products of checked unitaries)
    to avoid an O(n^3) recheck at large dimension.
    """

    __slots__ = ("dim", "entries", "unitarity_residual")

    def __init__(self, entries, residual: float | None = None):
        m = _as_complex_matrix(entries)
        if residual is None:
            gram = m.conj().T @ m
            residual = float(np.linalg.norm(gram - np.eye(m.shape[0])))
        if residual > UNITARITY_TOL:
            raise ValidationError(
                f"matrix is not unitary: ||U†U - 1||_F = {residual:.3e}"
            )
        m.setflags(write=False)
        self.dim = m.shape[0]
        self.entries = m
        self.unitarity_residual = residual

    def __repr__(self):
        return f"UnitaryOperator(dim={self.dim})"


def entries_of(x) -> np.ndarray:
    """Underlying complex matrix of an operator type or a raw array."""
    if isinstance(x, (HermitianOperator, DensityMatrix, UnitaryOperator)):
        return x.entries
    return np.asarray(x, dtype=np.complex128)


def eigh(h):
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Accepts a HermitianOperator, DensityMatrix, or raw array; raw input is
    validated first.  Returns (eigenvalues, eigenvector matrix with
    eigenvectors as columns).
    """
    if isinstance(h, (HermitianOperator, DensityMatrix)):
        m = h.entries
    else:
        m = _as_complex_matrix(h)
        _check_hermitian(m)
    w, v = np.linalg.eigh(m)
    return w, v


def commutator(a, b) -> np.ndarray:
    """[A, B] = AB - BA.  Anti-Hermitian for Hermitian inputs."""
    ma, mb = entries_of(a), entries_of(b)
    if ma.shape != mb.shape:
        raise DimensionMismatchError(f"commutator shapes {ma.shape} vs {mb.shape}")
    return ma @ mb - mb @ ma


def op_norm(x) -> float:
    """Largest singular value; equals max |eigenvalue| for Hermitian input."""
    m = entries_of(x)
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, ord=2))


def frobenius(x) -> float:
    return float(np.linalg.norm(entries_of(x)))


def tensor(x, y) -> np.ndarray:
    """System-major Kronecker product: index (i_S, i_E) -> i_S*dim_E + i_E."""
    return np.kron(entries_of(x), entries_of(y))


def partial_trace_env(x, dim_s: int, dim_e: int) -> np.ndarray:
    """Trace out the environment factor of a matrix on S (x) E."""
    m = entries_of(x)
    if m.shape != (dim_s * dim_e, dim_s * dim_e):
        raise DimensionMismatchError(
            f"matrix shape {m.shape} incompatible with dims {dim_s}x{dim_e}"
        )
    return np.einsum("iaja->ij", m.reshape(dim_s, dim_e, dim_s, dim_e))


def identity(d: int) -> np.ndarray:
    return np.eye(d, dtype=np.complex128)


def swap_gate(d: int) -> UnitaryOperator:
    """SWAP on a d(x)d product: |a,b> -> |b,a>.  Involutory permutation."""
    if d < 1:
        raise ValidationError("swap_gate requires d >= 1")
    s = np.zeros((d * d, d * d), dtype=np.complex128)
    for a in range(d):
        for b in range(d):
            s[b * d + a, a * d + b] = 1.0
    return UnitaryOperator(s, residual=0.0)


# ---------------------------------------------------------------------------
# seeded random ensembles


def random_hermitian(dim: int, seed: int, scale: float = 1.0) -> HermitianOperator:
    """Hermitian matrix with iid complex Gaussian entries, symmetrized."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return HermitianOperator(scale * (g + g.conj().T) / 2.0)


def random_density(dim: int, seed: int) -> DensityMatrix:
    """Full-rank random density matrix G G† / Tr[G G†]."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_pure_state(dim: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_unitary(dim: int, seed: int) -> UnitaryOperator:
    """Haar-ish random unitary from the QR of a complex Gaussian matrix."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    return UnitaryOperator(q)


def random_hermitian_with_spectrum(dim: int, eigenvalues, seed: int) -> HermitianOperator:
    """Hermitian matrix with the given spectrum in a random orthonormal basis."""
    ev = np.asarray(eigenvalues, dtype=float)
    if ev.size != dim:
        raise DimensionMismatchError(f"{ev.size} eigenvalues for dim {dim}")
    u = random_unitary(dim, seed).entries
    return HermitianOperator((u * ev) @ u.conj().T)


def _degenerate_blocks(eigenvalues: np.ndarray, tol: float) -> list[slice]:
    """Contiguous index ranges of (numerically) equal ascending eigenvalues."""
    blocks = []
    start = 0
    for i in range(1, eigenvalues.size + 1):
        if i == eigenvalues.size or eigenvalues[i] - eigenvalues[i - 1] > tol:
            blocks.append(slice(start, i))
            start = i
    return blocks


def random_conserving_unitary(a_total, seed: int) -> UnitaryOperator:
    """Random unitary commuting with ``a_total`` within 1e-9.

    Draws a random Hermitian generator, projects it onto the commutant of
    ``a_total`` (block-wise within eigenspaces), and exponentiates:
    U = exp(-iH).  Reproducible from the seed.
    """
    a = entries_of(a_total)
    w, v = eigh(a)
    scale = max(1.0, float(np.max(np.abs(w))))
    blocks = _degenerate_blocks(w, 1e-8 * scale)
    h = random_hermitian(a.shape[0], seed).entries
    ht = v.conj().T @ h @ v
    proj = np.zeros_like(ht)
    for blk in blocks:
        proj[blk, blk] = ht[blk, blk]
    pw, pv = np.linalg.eigh(proj)
    u = v @ ((pv * np.exp(-1j * pw)) @ pv.conj().T) @ v.conj().T
    out = UnitaryOperator(u)
    resid = op_norm(commutator(u, a))
    if resid > 1e-9:
        raise ValidationError(f"conserving unitary residual {resid:.3e} exceeds 1e-9")
    return out


# ---------------------------------------------------------------------------
# matrix exchange format: {"dim": n, "re": [[...]], "im": [[...]]}, row-major


def matrix_to_json(x) -> dict:
    m = entries_of(x)
    return {"dim": int(m.shape[0]), "re": m.real.tolist(), "im": m.imag.tolist()}


def matrix_from_json(obj: dict) -> np.ndarray:
    try:
        dim = int(obj["dim"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj["im"], dtype=float)
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed matrix object: {exc}") from exc
    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise ValidationError(
            f"matrix object dims inconsistent: dim={dim}, re {re.shape}, im {im.shape}"
        )
    return re + 1j * im


def hermitian_from_json(obj: dict) -> HermitianOperator:
    return HermitianOperator(matrix_from_json(obj))


def density_from_json(obj: dict) -> DensityMatrix:
    return DensityMatrix(matrix_from_json(obj))


def unitary_from_json(obj: dict) -> UnitaryOperator:
    return UnitaryOperator(matrix_from_json(obj))
