"""Gaussian-state analysis of concurrent two-mode-squeezing couplings.

A coupling graph assigns pair-creation strengths between optical modes
(self-loops mean degenerate down-conversion, i.e. single-mode squeezing).
Evolving vacuum under all couplings simultaneously gives the pure Gaussian
state V = (1/2) diag(e^{2rG}, e^{-2rG}) in (x1..xN, p1..pN) ordering, with G
the symmetric adjacency matrix. Conventions: hbar fixed so vacuum variance is
1/2; entanglement across a cut is witnessed by a partial-transpose symplectic
eigenvalue below 1/2.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

SYMMETRY_TOLERANCE = 1e-12

_POLS = ("Y", "Z")


@dataclass(frozen=True)
class Mode:
    """One optical mode: frequency tag plus polarization."""

    label: str
    polarization: str

    def __post_init__(self):
        if self.polarization not in _POLS:
            raise ValueError(f"polarization must be Y or Z, got {self.polarization!r}")

    @property
    def key(self) -> tuple[str, str]:
        return (self.label, self.polarization)


@dataclass(frozen=True)
class GraphEdge:
    """Pair-coupling between two mode indices (a == b for degenerate processes)."""

    a: int
    b: int
    kappa: float
    pump: str
    process: str

    def __post_init__(self):
        if self.kappa < 0.0:
            raise ValueError("coupling strength must be nonnegative")


@dataclass(frozen=True)
class ConcurrenceGraph:
    modes: tuple[Mode, ...]
    edges: tuple[GraphEdge, ...]

    def __post_init__(self):
        keys = [m.key for m in self.modes]
        if len(set(keys)) != len(keys):
            raise ValueError("mode (label, polarization) pairs must be unique")
        n = len(self.modes)
        for e in self.edges:
            if not (0 <= e.a < n and 0 <= e.b < n):
                raise ValueError(f"edge ({e.a}, {e.b}) references a mode out of range")

    @property
    def n_modes(self) -> int:
        return len(self.modes)


# Quadripartite entangler driven by pumps at 2w0, w0+w1 and 2w1 through the
# three concurrent processes. The w0+w1 pump drives every process
# nondegenerately (ZZZ and ZYY across frequencies, YZY in both polarization
# assignments), which is what makes the default graph connected; the 2w0 and
# 2w1 pumps add the degenerate self-loops. Fully overridable via the
# `assignment` argument of build_quadripartite.
DEFAULT_QUADRIPARTITE_ASSIGNMENT = (
    (("w0", "Z"), ("w0", "Z"), "2w0", "ZZZ"),
    (("w1", "Y"), ("w1", "Y"), "2w1", "ZYY"),
    (("w0", "Y"), ("w1", "Z"), "w0+w1", "YZY"),
    (("w0", "Z"), ("w1", "Y"), "w0+w1", "YZY"),
    (("w0", "Z"), ("w1", "Z"), "w0+w1", "ZZZ"),
    (("w0", "Y"), ("w1", "Y"), "w0+w1", "ZYY"),
)

QUADRIPARTITE_MODES = (
    Mode("w0", "Z"),
    Mode("w0", "Y"),
    Mode("w1", "Z"),
    Mode("w1", "Y"),
)


def build_quadripartite(
    kappa_zzz: float,
    kappa_yzy: float,
    kappa_zyy: float,
    assignment=DEFAULT_QUADRIPARTITE_ASSIGNMENT,
) -> ConcurrenceGraph:
    """Four-mode coupling graph {(w0,Z), (w0,Y), (w1,Z), (w1,Y)}.

    Each assignment entry is (mode_key_a, mode_key_b, pump_tag, process_tag)
    with mode keys (label, polarization); the edge weight is the kappa of its
    process tag. The default assignment is connected.
    """
    kappas = {"ZZZ": kappa_zzz, "YZY": kappa_yzy, "ZYY": kappa_zyy}
    for name, value in kappas.items():
        if value < 0.0:
            raise ValueError(f"kappa_{name.lower()} must be nonnegative")
    index_of = {m.key: i for i, m in enumerate(QUADRIPARTITE_MODES)}
    edges = []
    for key_a, key_b, pump, process in assignment:
        if process not in kappas:
            raise ValueError(f"unknown process tag {process!r}")
        try:
            a, b = index_of[tuple(key_a)], index_of[tuple(key_b)]
        except KeyError as exc:
            raise ValueError(f"unknown mode key {exc.args[0]!r}") from exc
        edges.append(GraphEdge(a=a, b=b, kappa=kappas[process], pump=pump, process=process))
    return ConcurrenceGraph(modes=QUADRIPARTITE_MODES, edges=tuple(edges))


def adjacency_matrix(graph: ConcurrenceGraph) -> np.ndarray:
    """Symmetric coupling matrix; self-loops contribute their kappa on the diagonal."""
    n = graph.n_modes
    g = np.zeros((n, n))
    for e in graph.edges:
        if e.a == e.b:
            g[e.a, e.a] += e.kappa
        else:
            g[e.a, e.b] += e.kappa
            g[e.b, e.a] += e.kappa
    return g


def is_connected(graph: ConcurrenceGraph) -> bool:
    """True when nonzero couplings join all modes into one component."""
    n = graph.n_modes
    adj = adjacency_matrix(graph)
    seen = {0}
    frontier = [0]
    while frontier:
        i = frontier.pop()
        for j in range(n):
            if j not in seen and adj[i, j] != 0.0:
                seen.add(j)
                frontier.append(j)
    return len(seen) == n


@dataclass(frozen=True)
class CovarianceState:
    """2N x 2N real symmetric covariance matrix, (x1..xN, p1..pN) ordering."""

    n_modes: int
    matrix: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.matrix, dtype=float)
        if v.shape != (2 * self.n_modes, 2 * self.n_modes):
            raise ValueError("covariance matrix must be 2N x 2N")
        if np.max(np.abs(v - v.T)) > 1e-9:
            raise ValueError("covariance matrix must be symmetric")
        v = 0.5 * (v + v.T)
        if np.min(symplectic_eigenvalues(v, self.n_modes)) < 0.5 - 1e-9:
            raise ValueError("covariance matrix violates the uncertainty bound")
        v.setflags(write=False)
        object.__setattr__(self, "matrix", v)


def vacuum_state(n_modes: int) -> CovarianceState:
    return CovarianceState(n_modes=n_modes, matrix=0.5 * np.eye(2 * n_modes))


def symplectic_form(n_modes: int) -> np.ndarray:
    omega = np.zeros((2 * n_modes, 2 * n_modes))
    omega[:n_modes, n_modes:] = np.eye(n_modes)
    omega[n_modes:, :n_modes] = -np.eye(n_modes)
    return omega


def symplectic_eigenvalues(matrix: np.ndarray, n_modes: int) -> np.ndarray:
    """The N symplectic eigenvalues: |eigenvalues| of i Omega V, deduplicated pairs."""
    ev = np.linalg.eigvals(1j * symplectic_form(n_modes) @ matrix)
    return np.sort(np.abs(ev))[::2]


def _sym_exp(g: np.ndarray, scale: float):
    """(e^{scale G}, e^{-scale G}) from one symmetric eigendecomposition."""
    w, q = np.linalg.eigh(g)
    plus = (q * np.exp(scale * w)) @ q.T
    minus = (q * np.exp(-scale * w)) @ q.T
    return 0.5 * (plus + plus.T), 0.5 * (minus + minus.T)


def evolution_matrix(g: np.ndarray, r: float) -> np.ndarray:
    """Symplectic S = diag(e^{rG}, e^{-rG}) generated by the coupling Hamiltonian."""
    g = _require_symmetric(g)
    n = g.shape[0]
    plus, minus = _sym_exp(g, r)
    s = np.zeros((2 * n, 2 * n))
    s[:n, :n] = plus
    s[n:, n:] = minus
    return s


def _require_symmetric(g) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValueError("coupling matrix must be square")
    if np.max(np.abs(g - g.T)) > SYMMETRY_TOLERANCE:
        raise ValueError("coupling matrix must be symmetric")
    return 0.5 * (g + g.T)


def evolve_vacuum(g: np.ndarray, r: float) -> CovarianceState:
    """Vacuum evolved under simultaneous pair couplings: V = (1/2) diag(e^{2rG}, e^{-2rG}).

    Pure by construction (every symplectic eigenvalue 1/2); r = 0 returns
    vacuum exactly.
    """
    g = _require_symmetric(g)
    n = g.shape[0]
    if r == 0.0:
        return vacuum_state(n)
    plus, minus = _sym_exp(g, 2.0 * r)
    v = np.zeros((2 * n, 2 * n))
    v[:n, :n] = 0.5 * plus
    v[n:, n:] = 0.5 * minus
    return CovarianceState(n_modes=n, matrix=v)


def ppt_min_eigenvalue(state: CovarianceState, subset) -> float:
    """Smallest symplectic eigenvalue after partial transposition of `subset`.

    Partial transposition flips the p-quadrature signs of the chosen modes; a
    value below 1/2 witnesses entanglement across the cut.
    """
    n = state.n_modes
    chosen = sorted(set(int(i) for i in subset))
    if not chosen:
        raise ValueError("bipartition subset must be nonempty")
    if len(chosen) >= n:
        raise ValueError("bipartition subset must be a proper subset of the modes")
    if chosen[0] < 0 or chosen[-1] >= n:
        raise ValueError("bipartition subset references a mode out of range")
    flip = np.ones(2 * n)
    for j in chosen:
        flip[n + j] = -1.0
    v_pt = state.matrix * np.outer(flip, flip)
    return float(np.min(symplectic_eigenvalues(v_pt, n)))


def canonical_bipartitions(n_modes: int) -> tuple[tuple[int, ...], ...]:
    """The 2^(N-1) - 1 distinct cuts, one representative per complement pair.

    Deterministic order: by subset size, then lexicographically; each
    representative is the side containing mode 0 when sizes tie, else the
    smaller side.
    """
    cuts = []
    for size in range(1, n_modes // 2 + 1):
        for subset in itertools.combinations(range(n_modes), size):
            if 2 * size == n_modes and 0 not in subset:
                continue
            cuts.append(subset)
    return tuple(sorted(cuts, key=lambda c: (len(c), c)))


def graph_to_document(graph: ConcurrenceGraph) -> dict:
    """JSON-encodable description (same key-value encoding family as the crystal DB)."""
    return {
        "modes": [{"label": m.label, "polarization": m.polarization} for m in graph.modes],
        "edges": [
            {"a": e.a, "b": e.b, "kappa": e.kappa, "pump": e.pump, "process": e.process}
            for e in graph.edges
        ],
    }
