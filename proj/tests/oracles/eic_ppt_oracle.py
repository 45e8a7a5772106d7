"""Independent oracle for the PPT-relaxed measured relative entropy bound.

Solves  min_sigma  KL(p(rho) || p(sigma))  over two-qubit sigma that are PSD,
unit trace and PPT, with p(.) the tetrahedral-SIC x tetrahedral-SIC statistics.
Uses cvxpy's exponential cone (Clarabel). The printed values are frozen into
tests/test_entms.cpp and tests/acceptance.cpp.
"""
import numpy as np
import cvxpy as cp

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0]).astype(complex)


def sic():
    vs = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]) / np.sqrt(3)
    return [(I2 + v[0] * X + v[1] * Y + v[2] * Z) / 4 for v in vs]


def werner(p):
    psi = np.array([0, 1, -1, 0]) / np.sqrt(2)
    return p * np.outer(psi, psi.conj()) + (1 - p) * np.eye(4) / 4


def bell():
    phi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    return np.outer(phi, phi.conj())


def solve(rho):
    effects = [np.kron(m, n) for m in sic() for n in sic()]
    p = np.array([np.trace(e @ rho).real for e in effects])
    # zero-probability outcomes contribute nothing to the divergence
    keep = [k for k in range(len(effects)) if p[k] > 1e-14]
    p = p[keep]
    s = cp.Variable((4, 4), hermitian=True)
    q = cp.hstack([cp.real(cp.trace(effects[k] @ s)) for k in keep])
    cons = [s >> 0, cp.trace(s) == 1,
            cp.partial_transpose(s, dims=[2, 2], axis=1) >> 0]
    obj = cp.sum(cp.rel_entr(p, q)) / np.log(2)
    prob = cp.Problem(cp.Minimize(obj), cons)
    prob.solve(solver=cp.CLARABEL, tol_gap_abs=1e-11, tol_gap_rel=1e-11, tol_feas=1e-11)
    return prob.value


if __name__ == "__main__":
    print("bell", repr(solve(bell())))
    for p in (0.1, 0.2, 1 / 3, 0.5, 0.9):
        print("werner", p, repr(solve(werner(p))))
