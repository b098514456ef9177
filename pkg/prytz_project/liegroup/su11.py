# liegroup/su11.py
"""
su(1,1) and PSU(1,1).

Algebra elements are stored by their coefficients (c1, c2, c3) in the basis

    e1 = [[0, 1], [1, 0]]   e2 = [[0, i], [-i, 0]]   e3 = [[i, 0], [0, -i]]

so the matrix is [[iγ, β], [β*, −iγ]] with β = c1 + i c2 and γ = c3. On the
circle e1, e2, e3 act as −2 sin θ ∂θ, 2 cos θ ∂θ and 2 ∂θ.

Group elements [[a, b], [b*, a*]] with |a|² − |b|² = 1 act on the circle by
e^{iθ} ↦ (a e^{iθ} + b) / (b* e^{iθ} + a*); ±I act alike and every element is
kept in the canonical sign (Re a > 0, or Re a = 0 and Im a > 0).
"""
from dataclasses import dataclass
import math

import numpy as np

TAYLOR_THRESHOLD = 1e-8

BASIS = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, 1j], [-1j, 0]], dtype=complex),
    np.array([[1j, 0], [0, -1j]], dtype=complex),
)


@dataclass(frozen=True)
class SU11Vector:
    c1: float = 0.0
    c2: float = 0.0
    c3: float = 0.0

    @classmethod
    def from_matrix(cls, m):
        m = np.asarray(m, dtype=complex)
        return cls(float(m[0, 1].real), float(m[0, 1].imag), float(m[0, 0].imag))

    @property
    def beta(self):
        return complex(self.c1, self.c2)

    @property
    def gamma(self):
        return self.c3

    @property
    def coefficients(self):
        return np.array([self.c1, self.c2, self.c3])

    def matrix(self):
        return np.array([[1j * self.c3, self.beta], [self.beta.conjugate(), -1j * self.c3]])

    def __add__(self, other):
        return SU11Vector(self.c1 + other.c1, self.c2 + other.c2, self.c3 + other.c3)

    def __sub__(self, other):
        return SU11Vector(self.c1 - other.c1, self.c2 - other.c2, self.c3 - other.c3)

    def __neg__(self):
        return SU11Vector(-self.c1, -self.c2, -self.c3)

    def __mul__(self, k):
        return SU11Vector(k * self.c1, k * self.c2, k * self.c3)

    __rmul__ = __mul__

    def bracket(self, other):
        """Matrix commutator [self, other]."""
        x1, x2, x3 = self.c1, self.c2, self.c3
        y1, y2, y3 = other.c1, other.c2, other.c3
        return SU11Vector(
            2.0 * (x2 * y3 - x3 * y2),
            2.0 * (x3 * y1 - x1 * y3),
            -2.0 * (x1 * y2 - x2 * y1),
        )

    def circle_field(self, theta):
        """dθ/dt of the flow this element generates on the circle."""
        return 2.0 * (self.c3 + self.c2 * np.cos(theta) - self.c1 * np.sin(theta))

    def norm(self):
        return math.sqrt(self.c1 ** 2 + self.c2 ** 2 + self.c3 ** 2)

    def as_dict(self):
        return {"e1": self.c1, "e2": self.c2, "e3": self.c3}


ZERO = SU11Vector()


def _canonical(a, b):
    if a.real < 0 or (a.real == 0 and a.imag < 0):
        return -a, -b
    return a, b


@dataclass(frozen=True)
class PSU11Element:
    a: complex = 1 + 0j
    b: complex = 0j

    def __post_init__(self):
        a, b = _canonical(complex(self.a), complex(self.b))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def identity(cls):
        return cls(1 + 0j, 0j)

    @classmethod
    def from_matrix(cls, m):
        m = np.asarray(m, dtype=complex)
        return cls(complex(m[0, 0]), complex(m[0, 1]))

    def matrix(self):
        return np.array([[self.a, self.b], [self.b.conjugate(), self.a.conjugate()]])

    @property
    def determinant(self):
        return abs(self.a) ** 2 - abs(self.b) ** 2

    def __mul__(self, other):
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        return PSU11Element(a1 * a2 + b1 * b2.conjugate(), a1 * b2 + b1 * a2.conjugate())

    def inverse(self):
        return PSU11Element(self.a.conjugate(), -self.b)

    def renormalized(self):
        """Rescale onto |a|² − |b|² = 1."""
        scale = math.sqrt(self.determinant)
        return PSU11Element(self.a / scale, self.b / scale)

    def adjoint(self, v):
        """Ad_g(v) = g v g⁻¹."""
        g = self.matrix()
        return SU11Vector.from_matrix(g @ v.matrix() @ self.inverse().matrix())

    def adjoint_inverse(self, v):
        """Ad_{g⁻¹}(v) = g⁻¹ v g."""
        return self.inverse().adjoint(v)

    @property
    def kind(self):
        """elliptic, parabolic or hyperbolic, from |tr g| = 2|Re a|."""
        trace = abs(self.a.real)
        if math.isclose(trace, 1.0, rel_tol=0.0, abs_tol=1e-12):
            return "parabolic"
        return "elliptic" if trace < 1.0 else "hyperbolic"

    def close_to(self, other, tol=1e-12):
        """Equality as elements of PSU(1,1)."""
        d_plus = max(abs(self.a - other.a), abs(self.b - other.b))
        d_minus = max(abs(self.a + other.a), abs(self.b + other.b))
        return min(d_plus, d_minus) <= tol

    def as_dict(self):
        return {"a": [self.a.real, self.a.imag], "b": [self.b.real, self.b.imag]}


def exp_coefficients(c1, c2, c3):
    """
    (a, b) of exp(X) for X = c1 e1 + c2 e2 + c3 e3. X² = ΔI with
    Δ = |β|² − γ², so exp(X) = C(Δ) I + S(Δ) X with C, S the even and odd
    parts of cosh(√Δ).
    """
    delta = c1 * c1 + c2 * c2 - c3 * c3
    if abs(delta) < TAYLOR_THRESHOLD:
        C = 1.0 + delta / 2.0
        S = 1.0 + delta / 6.0
    elif delta > 0:
        root = math.sqrt(delta)
        C, S = math.cosh(root), math.sinh(root) / root
    else:
        root = math.sqrt(-delta)
        C, S = math.cos(root), math.sin(root) / root
    return complex(C, S * c3), complex(S * c1, S * c2)


def exp(v):
    a, b = exp_coefficients(v.c1, v.c2, v.c3)
    return PSU11Element(a, b).renormalized()


def act(g, theta):
    """
    Image of the angle θ under the Möbius map of g, unwrapped so that the
    result is the continuous continuation from θ (the identity maps θ to θ).
    Works elementwise on arrays.
    """
    theta = np.asarray(theta, dtype=float)
    z = np.exp(1j * theta)
    # (a z + b)/(b* z + a*) = z (a + b z*) / conj(a + b z*), so the image angle
    # is θ + 2 arg(a + b z*); arg(a + b z*) varies continuously because |a| > |b|
    shift = 2.0 * np.angle(g.a + g.b * np.conj(z))
    image = theta + shift
    return float(image) if image.ndim == 0 else image


def rotation_angle(g):
    """
    Rotation number of an elliptic element as an angle: g is conjugate to
    the rotation θ ↦ θ + ρ. Signed by the sense of rotation; None if g is
    not elliptic.
    """
    if g.kind != "elliptic":
        return None
    return math.copysign(2.0 * math.acos(g.a.real), g.a.imag)
