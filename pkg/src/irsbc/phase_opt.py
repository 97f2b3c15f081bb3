"""SDR-lifted phase-shift design with a rank-one penalty SCA loop.

The quadratic phase problem is lifted to a Hermitian matrix V = v^H v with
unit diagonal. Each SCA step maximizes a linear objective minus the
linearized rank penalty (trace norm minus spectral norm) over the PSD cone
with linear inequality constraints; a unit-modulus vector is extracted from
the near-rank-one solution at the end.

Conventions: ``v`` is the length-M phase vector (row form), V_mn =
conj(v_m) v_n, and Tr(R V) = |v H f|^2 with R = H f f^H H^H, H = diag(h).
"""

from dataclasses import dataclass, field

import cvxpy as cp
import numpy as np

from .channel import ChannelRealization
from .errors import Infeasible, SolverFailure
from .rates import DecodingOrder, LinkBudget, NomaAllocation


@dataclass(frozen=True)
class PenaltyConfig:
    """Penalty factor and stopping rules for the SCA loop."""

    mu: float = 5e-5
    sca_tol: float = 1e-5       # relative change of the penalized objective
    max_sca_iters: int = 50
    rank_tol: float = 1e-4      # relative rank-one residual at convergence

    def __post_init__(self):
        if self.mu <= 0 or self.sca_tol <= 0 or self.rank_tol <= 0:
            raise ValueError("mu and tolerances must be > 0")
        if self.max_sca_iters < 1:
            raise ValueError("max_sca_iters must be >= 1")


@dataclass
class SdpSubproblem:
    """One lifted phase subproblem: maximize Tr(objective_matrix @ V) subject
    to Tr(A_i V) >= b_i, diag(V) = 1, V PSD."""

    objective_matrix: np.ndarray
    constraints: list[tuple[np.ndarray, float]]
    num_elements: int


@dataclass
class ScaResult:
    """Outcome of the penalty SCA loop."""

    V: np.ndarray
    iterations: int
    objective_trace: list[float]
    rank_residual: float
    rank_residual_high: bool


def random_unit_modulus(m: int, rng: np.random.Generator) -> np.ndarray:
    """i.i.d. uniform phases on [0, 2 pi)."""
    return np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, m))


def _cascade_outer(h: np.ndarray, f: np.ndarray) -> np.ndarray:
    """R = H f f^H H^H with H = diag(h)."""
    u = h * f
    return np.outer(u, u.conj())


def build_subproblem(channels: ChannelRealization, alloc: NomaAllocation,
                     order: DecodingOrder, budget: LinkBudget) -> SdpSubproblem:
    """Assemble the lifted subproblem for fixed power split and coefficients.

    Constraint list, all in the sense Tr(A V) >= b:
      1. weak-user QoS, rearranged linearly;
      2-3. secondary QoS at each user;
      4. decoding-order inequality (zero bound).
    The objective matrix is the strong user's cascaded outer product scaled
    by alpha a_s P_T / sigma^2, so the penalty weight keeps its nominal
    relative magnitude.
    """
    alpha, gamma = alloc.alpha, budget.qos_threshold
    p_t, sigma2, spread = budget.tx_power, budget.noise_power, budget.spreading_gain
    a_s, a_w = alloc.a[order.strong], alloc.a[order.weak]

    R = [_cascade_outer(channels.h, fk) for fk in channels.f]
    R_s, R_w = R[order.strong], R[order.weak]

    weak_coeff = alpha * p_t * (a_w - gamma * a_s)
    if gamma > 0 and weak_coeff <= 0:
        raise Infeasible("weak_qos", "weak-user QoS unrepresentable: a_w <= gamma a_s")

    constraints = [
        (weak_coeff * R_w, gamma * sigma2),
        (spread * (1.0 - alpha) * p_t * R[0], gamma * sigma2),
        (spread * (1.0 - alpha) * p_t * R[1], gamma * sigma2),
        (R_s - R_w, 0.0),
    ]
    scale = alpha * a_s * p_t / sigma2
    return SdpSubproblem(objective_matrix=scale * R_s, constraints=constraints,
                         num_elements=channels.num_elements)


def rank_penalty(V: np.ndarray) -> float:
    """Trace norm minus spectral norm; zero exactly for rank-one PSD V."""
    eig = np.linalg.eigvalsh(V)
    return float(eig.sum() - eig.max())


def spectral_subgradient(V: np.ndarray) -> np.ndarray:
    """u u^H for a unit principal eigenvector u: a subgradient of the
    spectral norm at PSD V. The eigenvector's global phase is normalized
    for reproducibility."""
    if not np.any(V):
        raise ValueError("spectral subgradient of the zero matrix is undefined")
    _, vecs = np.linalg.eigh(V)
    u = _fix_global_phase(vecs[:, -1])
    return np.outer(u, u.conj())


def _fix_global_phase(u: np.ndarray) -> np.ndarray:
    """Rotate so the largest-magnitude entry is real and positive."""
    idx = int(np.argmax(np.abs(u)))
    pivot = u[idx]
    if abs(pivot) == 0:
        return u
    return u * (pivot.conjugate() / abs(pivot))


def extract_phases(V: np.ndarray) -> np.ndarray:
    """Unit-modulus vector from a (near) rank-one lifted matrix.

    Takes the principal eigenvector scaled by the root of the top
    eigenvalue, then projects entrywise onto the unit circle. With
    V_mn = conj(v_m) v_n the eigenvector is conj(v), hence the conjugate.
    """
    eigval, vecs = np.linalg.eigh(V)
    u = _fix_global_phase(vecs[:, -1])
    v = np.conj(u) * np.sqrt(max(eigval[-1], 0.0))
    mags = np.abs(v)
    out = np.where(mags > 0, v / np.where(mags > 0, mags, 1.0), 1.0 + 0j)
    return out


class _CompiledSdp:
    """cvxpy model with parameterized objective and constraint data.

    One instance is compiled per SCA loop so repeated solves reuse the
    canonicalization; the warm-start state never leaks across loops, which
    keeps results independent of trial execution order.
    """

    def __init__(self, m: int, n_constraints: int):
        self.m = m
        self.V = cp.Variable((m, m), hermitian=True)
        self.obj = cp.Parameter((m, m), hermitian=True)
        self.A = [cp.Parameter((m, m), hermitian=True) for _ in range(n_constraints)]
        self.b = [cp.Parameter() for _ in range(n_constraints)]
        cons = [cp.diag(self.V) == 1, self.V >> 0]
        cons += [cp.real(cp.trace(Ai @ self.V)) >= bi
                 for Ai, bi in zip(self.A, self.b)]
        self.problem = cp.Problem(
            cp.Maximize(cp.real(cp.trace(self.obj @ self.V))), cons)
        self._warm = False

    def set_constraints(self, constraints: list[tuple[np.ndarray, float]]):
        """Load normalized constraint data (bounds scaled to 1 or 0)."""
        self._norm = []
        for (A, b), pA, pb in zip(constraints, self.A, self.b):
            if b > 0:
                A_n, b_n = A / b, 1.0
            else:
                s = np.abs(A).max()
                A_n, b_n = (A / s, 0.0) if s > 0 else (np.zeros_like(A), -1.0)
            pA.value = _hermitize(A_n)
            pb.value = b_n
            self._norm.append((pA.value, b_n))

    def solve(self, C: np.ndarray) -> np.ndarray:
        """Maximize Tr(C V); C is rescaled to unit spectral norm internally."""
        C = _hermitize(C)
        norm = np.linalg.norm(C, 2)
        self.obj.value = C / norm if norm > 0 else C
        V = self._try_solvers()
        return _hermitize(V)

    def _try_solvers(self) -> np.ndarray:
        attempts = [
            dict(solver=cp.SCS, warm_start=self._warm, eps=1e-7, max_iters=50000),
            dict(solver=cp.CLARABEL),
            dict(solver=cp.SCS, warm_start=False, eps=1e-8, max_iters=100000),
        ]
        last = None
        for i, kw in enumerate(attempts):
            try:
                self.problem.solve(**kw)
            except cp.error.SolverError as exc:
                last = str(exc)
                continue
            if self.problem.status == cp.INFEASIBLE:
                raise Infeasible("sdp_subproblem", "lifted subproblem infeasible")
            # fallback attempts may report an inaccurate optimum; trust the
            # explicit constraint-residual check rather than the status alone
            good = (cp.OPTIMAL,) if i == 0 else (cp.OPTIMAL,
                                                 cp.OPTIMAL_INACCURATE)
            V = self.V.value
            if V is not None and self.problem.status in good \
                    and self._feasible(V):
                self._warm = True
                return V
            last = self.problem.status
        raise SolverFailure(
            "PSD-cone solve did not reach the required accuracy",
            diagnostics={"status": last, "residuals": self._residuals()})

    def _feasible(self, V: np.ndarray, tol: float = 1e-6) -> bool:
        for A_n, b_n in self._norm:
            if np.real(np.trace(A_n @ V)) < b_n - tol:
                return False
        return np.abs(np.diag(V) - 1.0).max() < tol

    def _residuals(self):
        V = self.V.value
        if V is None:
            return None
        return [float(b_n - np.real(np.trace(A_n @ V)))
                for A_n, b_n in self._norm]


def _hermitize(V: np.ndarray) -> np.ndarray:
    return (V + V.conj().T) / 2.0


def _check_scalar_feasible(problem: SdpSubproblem, tol: float = 1e-9):
    """M = 1: V = [[1]] is the only lifted point; just test the constraints."""
    for A, b in problem.constraints:
        if np.real(A[0, 0]) < b - tol * max(1.0, abs(b)):
            raise Infeasible("sdp_subproblem", "single-element instance infeasible")


def solve_sdp_subproblem(problem: SdpSubproblem, penalty_direction: np.ndarray,
                         mu: float, compiled: _CompiledSdp | None = None) -> np.ndarray:
    """One linearized penalty step: maximize
    Tr(objective V) - (1/2 mu) (Tr V - Tr(penalty_direction V))."""
    m = problem.num_elements
    if m == 1:
        _check_scalar_feasible(problem)
        return np.ones((1, 1), dtype=complex)
    if compiled is None:
        compiled = _CompiledSdp(m, len(problem.constraints))
        compiled.set_constraints(problem.constraints)
    C = problem.objective_matrix - (np.eye(m) - penalty_direction) / (2.0 * mu)
    return compiled.solve(C)


def _penalized_objective(problem: SdpSubproblem, V: np.ndarray, mu: float) -> float:
    return float(np.real(np.trace(problem.objective_matrix @ V))
                 - rank_penalty(V) / (2.0 * mu))


def sca_penalty_loop(problem: SdpSubproblem,
                     init: np.ndarray | None = None,
                     config: PenaltyConfig = PenaltyConfig()) -> ScaResult:
    """Iterate linearized penalty solves until the penalized objective stalls.

    Starts from the identity (always PSD with unit diagonal); if that point
    violates the QoS constraints, one penalty-free solve provides a feasible
    start. The true (non-linearized) penalized objective is tracked and is
    nondecreasing by the minorize-maximize construction.
    """
    m = problem.num_elements
    if m == 1:
        _check_scalar_feasible(problem)
        V = np.ones((1, 1), dtype=complex)
        return ScaResult(V=V, iterations=1, objective_trace=[
            _penalized_objective(problem, V, config.mu)],
            rank_residual=0.0, rank_residual_high=False)

    compiled = _CompiledSdp(m, len(problem.constraints))
    compiled.set_constraints(problem.constraints)

    if init is not None:
        V = _hermitize(init)
    else:
        V = np.eye(m, dtype=complex)
        if not compiled._feasible(V):
            V = compiled.solve(problem.objective_matrix)

    trace = [_penalized_objective(problem, V, config.mu)]
    for it in range(config.max_sca_iters):
        direction = spectral_subgradient(V)
        V = solve_sdp_subproblem(problem, direction, config.mu, compiled)
        trace.append(_penalized_objective(problem, V, config.mu))
        if abs(trace[-1] - trace[-2]) < config.sca_tol * (1.0 + abs(trace[-1])):
            break

    residual = rank_penalty(V) / max(np.real(np.trace(V)), np.finfo(float).tiny)
    return ScaResult(V=V, iterations=len(trace) - 1, objective_trace=trace,
                     rank_residual=float(residual),
                     rank_residual_high=residual > config.rank_tol)
