"""Independent reference computations for the test-suite.

Nothing here imports ``posmaps``: Choi matrices are assembled with explicit
loops, spectra come from ``numpy.linalg.eigvalsh`` and positivity of maps on
``M_2`` is bounded by a dense grid over the Bloch sphere.  Frozen values were
produced by these routines (grid runs at 721 x 721 points).
"""

import numpy as np

# spectrum of the 9x9 Choi matrix of Choi's map and of its partial transpose
CHOI3_SPECTRUM = np.array([-1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 2.0, 2.0])
_G = (1 + np.sqrt(5)) / 2
CHOI3_PT_SPECTRUM = np.array([1 - _G] * 3 + [1.0] * 3 + [_G] * 3)

# min over unit x of lambda_min(T(p_x)), 721 x 721 grid
STORMER_EXAMPLE_GRID_MIN = -0.278949833420527  # alpha=beta=gamma=1/2, delta=1, eps=1/sqrt 2
FACE_LAM0_Y1_GRID_MIN = -0.20710678118654766  # lambda=0, y=1, z=t=0
FACE_LAM1_T01_GRID_MIN = -0.018920080514129432  # lambda=1, y=1/sqrt 2, z=0, t=0.1


def choi_loop(f, din, dout):
    H = np.zeros((din * dout, din * dout), dtype=complex)
    for i in range(din):
        for j in range(din):
            e = np.zeros((din, din), dtype=complex)
            e[i, j] = 1
            H[i * dout:(i + 1) * dout, j * dout:(j + 1) * dout] = f(e)
    return H


def pt_first_loop(H, d1, d2):
    out = np.zeros_like(H)
    for i in range(d1):
        for j in range(d1):
            out[i * d2:(i + 1) * d2, j * d2:(j + 1) * d2] = H[j * d2:(j + 1) * d2, i * d2:(i + 1) * d2]
    return out


def pt_second_loop(H, d1, d2):
    out = np.zeros_like(H)
    for i in range(d1):
        for j in range(d1):
            out[i * d2:(i + 1) * d2, j * d2:(j + 1) * d2] = H[i * d2:(i + 1) * d2, j * d2:(j + 1) * d2].T
    return out


def apply_loop(H, a, din, dout):
    out = np.zeros((dout, dout), dtype=complex)
    for i in range(din):
        for j in range(din):
            out += a[i, j] * H[i * dout:(i + 1) * dout, j * dout:(j + 1) * dout]
    return out


def random_hermitian(rng, n, scale=1.0):
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * (A + A.conj().T) / 2


def random_psd(rng, n, rank=None):
    rank = n if rank is None else rank
    G = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    return G @ G.conj().T


def random_unitary(rng, n):
    Q, R = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_images(rng, din, dout):
    """Images of matrix units for a random Hermiticity-preserving map."""
    imgs = {}
    for i in range(din):
        for j in range(i, din):
            if i == j:
                imgs[i, i] = random_hermitian(rng, dout)
            else:
                m = rng.normal(size=(dout, dout)) + 1j * rng.normal(size=(dout, dout))
                imgs[i, j], imgs[j, i] = m, m.conj().T
    return [imgs[i, j] for i in range(din) for j in range(din)]


def face_images(lam, y, z, t):
    """The unital face map on M_2 in the standard bases, straight from its formula."""
    T11 = np.array([[0, 0], [0, lam]], dtype=complex)
    T12 = np.array([[0, y], [np.conj(z), t]], dtype=complex)
    T22 = np.array([[1, 0], [0, 1 - lam]], dtype=complex)
    return [T11, T12, T12.conj().T, T22]


def grid_min_2d(images, n=241):
    """min over a Bloch-sphere grid of lambda_min(T(p_x)) for a map on M_2."""
    th, ph = np.meshgrid(np.linspace(0, np.pi, n), np.linspace(0, 2 * np.pi, n))
    x = np.stack([np.cos(th / 2), np.exp(1j * ph) * np.sin(th / 2)], -1).reshape(-1, 2)
    P = sum(
        np.einsum("n,kl->nkl", x[:, i] * x[:, j].conj(), images[2 * i + j]) for i in range(2) for j in range(2)
    )
    return float(np.linalg.eigvalsh(P)[:, 0].min())


def slice_params(rng, allow_t=True):
    """Admissible face-map parameters on |y| + |z| = sqrt(lambda).

    Positivity on the slice needs t = 0, or arg t = (arg y - arg z + pi) / 2
    together with |t|^2 <= 4 (1 - lambda) |y| |z|.
    """
    lam = rng.uniform(0.05, 1.0)
    s = np.sqrt(lam)
    ay = s * rng.uniform(0.05, 0.95)
    az = s - ay
    thy, thz = rng.uniform(-np.pi, np.pi, 2)
    y, z = ay * np.exp(1j * thy), az * np.exp(1j * thz)
    t = 0j
    if allow_t and rng.uniform() < 0.8:
        r = 2 * np.sqrt((1 - lam) * ay * az) * rng.uniform(0, 1)
        t = r * np.exp(1j * (thy - thz + np.pi) / 2)
    return lam, y, z, t
