# Scratch validation 3: Kerr ME convention vs analytic Wigner.
import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
import math
from scipy.special import loggamma

def kerr_liouvillian(kap, eps, dw, chi, L, sgn_dw=+1):
    D = L+1
    a = sp.lil_matrix((D, D))
    for n in range(1, D):
        a[n-1, n] = math.sqrt(n)
    a = a.tocsr(); ad = a.getH(); num = ad@a
    n2 = num@num - num   # a^dag^2 a^2 = n(n-1)
    I = sp.identity(D, format='csr')
    kron = sp.kron
    # corrected conventional form: drho/dt = sgn_dw*i*dw[n,rho] - i*chi[n2,rho] + eps[ad-a,rho] + kap D[a]
    com = lambda A: kron(A, I, 'csr') - kron(I, A.T, 'csr')
    Ls = sgn_dw*1j*dw*com(num) - 1j*chi*com(n2) + eps*(kron(ad-a, I, 'csr') - kron(I, (ad-a).T, 'csr')) \
         + kap*(2*kron(a, a.conj(), 'csr') - kron(num, I, 'csr') - kron(I, num.T, 'csr'))
    return Ls, D

def steady(Ls, D):
    N = D*D
    A = Ls.tolil()
    tr = np.zeros(N)
    for k in range(D):
        tr[k*D+k] = 1.0
    A[0, :] = tr
    b = np.zeros(N, complex); b[0] = 1.0
    return spla.spsolve(A.tocsc(), b).reshape(D, D)

def wigner_fock(rho, xs, ys):
    # W(a) = (2/pi) sum_mn rho_mn (-1)^m <n|D(2a)|m>, D-matrix els via Laguerre
    from scipy.special import eval_genlaguerre, gammaln
    L = rho.shape[0]-1
    W = np.zeros((len(ys), len(xs)))
    lf = np.concatenate([[0.0], np.cumsum(np.log(np.arange(1, L+1)))])
    for iy, y in enumerate(ys):
        for ix, x in enumerate(xs):
            al = x + 1j*y
            b = 2*al
            s = 0.0
            for m in range(L+1):
                # diagonal
                s += np.real(rho[m, m]) * (-1)**m * eval_genlaguerre(m, 0, abs(b)**2)
                for n in range(m+1, L+1):
                    Dnm = math.exp(0.5*(lf[m]-lf[n])) * b**(n-m) * eval_genlaguerre(m, n-m, abs(b)**2)
                    s += 2*np.real(rho[m, n] * (-1)**m * np.conj(Dnm)*0 + rho[m, n]*0)  # placeholder
            W[iy, ix] = s
    return W

# Do Wigner via explicit displaced parity op instead (exact, small D): W = (2/pi) Tr[rho D(2a) P]? Use direct op
def wigner_op(rho, xs, ys):
    D = rho.shape[0]
    a = np.zeros((D, D), complex)
    for n in range(1, D):
        a[n-1, n] = math.sqrt(n)
    ad = a.conj().T
    P = np.diag([(-1.0)**n for n in range(D)])
    W = np.zeros((len(ys), len(xs)))
    from scipy.linalg import expm
    for iy, y in enumerate(ys):
        for ix, x in enumerate(xs):
            al = x + 1j*y
            Dop = expm(al*ad - np.conj(al)*a)
            W[iy, ix] = (2/np.pi)*np.real(np.trace(rho @ Dop @ P @ Dop.conj().T))
    return W

def wigner_analytic(xs, ys, kap, eps, dw, chi):
    lam_ = (kap - 1j*dw)/(1j*chi)
    epst = eps/(1j*chi)
    W = np.zeros((len(ys), len(xs)))
    for iy, y in enumerate(ys):
        for ix, x in enumerate(xs):
            w = x - 1j*y
            u = -8*epst*w
            # F(u) = sum_k (-u/4)^k/(k! Gamma(lam+k)), via recurrence, start 1/Gamma(lam)
            t = np.exp(-loggamma(lam_))
            ssum = t
            for k in range(400):
                t = t * (-u/4)/((k+1)*(lam_+k))
                ssum += t
                if abs(t) < 1e-18*abs(ssum):
                    break
            W[iy, ix] = np.exp(-2*(x*x+y*y))*abs(ssum)**2
    return W

# small cheap point first: kap/chi=2, eps/chi=5, dw/chi=6, L=25
kap, eps, dw, chi, L = 2.0, 5.0, 6.0, 1.0, 30
for sgn in (+1, -1):
    Ls, D = kerr_liouvillian(kap, eps, dw, chi, L, sgn)
    rho = steady(Ls, D)
    n_ss = np.real(np.trace(np.diag(np.arange(D)) @ rho))
    xs = np.linspace(-4, 4, 33); ys = np.linspace(-4, 4, 33)
    Wn = wigner_op(rho, xs, ys)
    Wa = wigner_analytic(xs, ys, kap, eps, dw, chi)
    Wa *= Wn.sum()/Wa.sum()  # normalize to match
    print(f"sgn_dw={sgn}: n_ss={n_ss:.4f} maxabsdiff={np.max(np.abs(Wn-Wa)):.3e} relto max W={Wn.max():.3e}")
