//! Exact SU(2)/U(2) algebra for single-qubit pulses.
//!
//! A pulse with unit axis `m` and rotation angle `theta` implements
//!
//!   R(m, theta) = exp(-i theta (m . sigma) / 2)
//!               = cos(theta/2) I - i sin(theta/2) (m . sigma)
//!
//! with the standard Pauli vector sigma = (sigma_x, sigma_y, sigma_z).
//! The corresponding Bloch-sphere action is the right-handed rotation of
//! expectation vectors about `m` by `theta`.

use num_complex::Complex64;

use crate::error::{PulseError, Result};

/// Tolerance below which |sin(theta/2)| makes the rotation axis meaningless.
pub const AXIS_DEGENERACY_TOL: f64 = 1e-8;

const UNIT_NORM_TOL: f64 = 1e-8;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// General 2x2 complex matrix, row-major. The workhorse behind both the
/// unitary gate type and Hermitian error generators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [Complex64; 4]);

impl Mat2 {
    pub fn new(a: Complex64, b: Complex64, cc: Complex64, d: Complex64) -> Self {
        Mat2([a, b, cc, d])
    }

    pub fn zero() -> Self {
        Mat2([c(0.0, 0.0); 4])
    }

    pub fn identity() -> Self {
        Mat2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0))
    }

    pub fn sigma_x() -> Self {
        Mat2::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0))
    }

    pub fn sigma_y() -> Self {
        Mat2::new(c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0))
    }

    pub fn sigma_z() -> Self {
        Mat2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0))
    }

    /// m . sigma for a real 3-vector m (need not be unit length here).
    pub fn dot_sigma(m: [f64; 3]) -> Self {
        let [mx, my, mz] = m;
        Mat2::new(c(mz, 0.0), c(mx, -my), c(mx, my), c(-mz, 0.0))
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.0[2 * row + col]
    }

    pub fn mul(&self, other: &Mat2) -> Mat2 {
        let [a, b, cc, d] = self.0;
        let [e, f, g, h] = other.0;
        Mat2([a * e + b * g, a * f + b * h, cc * e + d * g, cc * f + d * h])
    }

    pub fn add(&self, other: &Mat2) -> Mat2 {
        let mut out = *self;
        for i in 0..4 {
            out.0[i] += other.0[i];
        }
        out
    }

    pub fn sub(&self, other: &Mat2) -> Mat2 {
        let mut out = *self;
        for i in 0..4 {
            out.0[i] -= other.0[i];
        }
        out
    }

    pub fn scale(&self, k: Complex64) -> Mat2 {
        let mut out = *self;
        for i in 0..4 {
            out.0[i] *= k;
        }
        out
    }

    pub fn dagger(&self) -> Mat2 {
        let [a, b, cc, d] = self.0;
        Mat2([a.conj(), cc.conj(), b.conj(), d.conj()])
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0] + self.0[3]
    }

    pub fn det(&self) -> Complex64 {
        self.0[0] * self.0[3] - self.0[1] * self.0[2]
    }

    pub fn commutator(&self, other: &Mat2) -> Mat2 {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Operator 2-norm (largest singular value), from the eigenvalues of
    /// the 2x2 positive matrix M^dag M.
    pub fn operator_norm(&self) -> f64 {
        let g = self.dagger().mul(self);
        let t = g.trace().re;
        let d = g.det().re;
        let disc = (t * t - 4.0 * d).max(0.0).sqrt();
        ((t + disc) / 2.0).max(0.0).sqrt()
    }

    /// Deviation from hermiticity, ||M - M^dag||_F.
    pub fn hermiticity_defect(&self) -> f64 {
        self.sub(&self.dagger()).frobenius_norm()
    }

    pub fn apply(&self, v: &Ket2) -> Ket2 {
        Ket2([
            self.0[0] * v.0[0] + self.0[1] * v.0[1],
            self.0[2] * v.0[0] + self.0[3] * v.0[1],
        ])
    }
}

/// Complex 2-vector (a pure qubit state when normalized).
#[derive(Debug, Clone, Copy)]
pub struct Ket2(pub [Complex64; 2]);

impl Ket2 {
    pub fn new(a: Complex64, b: Complex64) -> Self {
        Ket2([a, b])
    }

    /// <self|other>.
    pub fn inner(&self, other: &Ket2) -> Complex64 {
        self.0[0].conj() * other.0[0] + self.0[1].conj() * other.0[1]
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).re.sqrt()
    }

    /// Bloch vector of expectation values <sigma_i>. Only meaningful for a
    /// normalized state.
    pub fn bloch(&self) -> [f64; 3] {
        let [a, b] = self.0;
        let cross = a.conj() * b;
        [2.0 * cross.re, 2.0 * cross.im, a.norm_sqr() - b.norm_sqr()]
    }
}

/// Unit vector on the Bloch sphere. Construction rejects zero vectors and,
/// for [`BlochVector::new`], anything measurably away from unit norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    v: [f64; 3],
}

impl BlochVector {
    /// x-axis unit vector.
    pub const X: BlochVector = BlochVector { v: [1.0, 0.0, 0.0] };
    /// y-axis unit vector.
    pub const Y: BlochVector = BlochVector { v: [0.0, 1.0, 0.0] };
    /// z-axis unit vector.
    pub const Z: BlochVector = BlochVector { v: [0.0, 0.0, 1.0] };

    /// Accepts a vector already of unit norm (within 1e-8) and renormalizes
    /// the residual away.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if (norm - 1.0).abs() > UNIT_NORM_TOL {
            return Err(PulseError::NonUnitAxis { norm });
        }
        Ok(BlochVector {
            v: [x / norm, y / norm, z / norm],
        })
    }

    /// Normalizes an arbitrary nonzero vector onto the sphere.
    pub fn normalized(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if norm < 1e-12 {
            return Err(PulseError::ZeroVector);
        }
        Ok(BlochVector {
            v: [x / norm, y / norm, z / norm],
        })
    }

    /// Unit vector in the xy-plane at azimuth `phi` (the pulse-phase
    /// convention: phi = 0 is the x-axis).
    pub fn xy(phi: f64) -> Self {
        BlochVector {
            v: [phi.cos(), phi.sin(), 0.0],
        }
    }

    pub fn components(&self) -> [f64; 3] {
        self.v
    }

    pub fn x(&self) -> f64 {
        self.v[0]
    }

    pub fn y(&self) -> f64 {
        self.v[1]
    }

    pub fn z(&self) -> f64 {
        self.v[2]
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.v[0] * other.v[0] + self.v[1] * other.v[1] + self.v[2] * other.v[2]
    }

    pub fn cross(&self, other: &BlochVector) -> [f64; 3] {
        let a = self.v;
        let b = other.v;
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    }

    pub fn antipode(&self) -> BlochVector {
        BlochVector {
            v: [-self.v[0], -self.v[1], -self.v[2]],
        }
    }

    /// Right-handed rotation of this vector about `axis` by `angle`
    /// (Rodrigues formula). Matches the spinor conjugation convention:
    /// rotating x about z by +pi/2 gives y.
    pub fn rotate_about(&self, axis: &BlochVector, angle: f64) -> BlochVector {
        let (s, co) = angle.sin_cos();
        let k = axis.v;
        let n = self.v;
        let kxn = axis.cross(self);
        let kdn = axis.dot(self);
        let mut out = [0.0; 3];
        for i in 0..3 {
            out[i] = n[i] * co + kxn[i] * s + k[i] * kdn * (1.0 - co);
        }
        // Renormalize; Rodrigues preserves the norm only up to rounding.
        let norm = (out[0] * out[0] + out[1] * out[1] + out[2] * out[2]).sqrt();
        BlochVector {
            v: [out[0] / norm, out[1] / norm, out[2] / norm],
        }
    }

    /// Eigenstate of m . sigma with eigenvalue +1, via half-angle formulas.
    pub fn plus_state(&self) -> Ket2 {
        let beta = self.v[2].clamp(-1.0, 1.0).acos();
        let phi = self.v[1].atan2(self.v[0]);
        let (hs, hc) = (beta / 2.0).sin_cos();
        Ket2::new(c(hc, 0.0), Complex64::from_polar(hs, phi))
    }

    /// Eigenstate of m . sigma with eigenvalue -1, orthonormal to
    /// [`BlochVector::plus_state`].
    pub fn minus_state(&self) -> Ket2 {
        let beta = self.v[2].clamp(-1.0, 1.0).acos();
        let phi = self.v[1].atan2(self.v[0]);
        let (hs, hc) = (beta / 2.0).sin_cos();
        Ket2::new(-Complex64::from_polar(hs, -phi), c(hc, 0.0))
    }
}

/// Canonical axis-angle-phase decomposition of a 2x2 unitary:
/// U = exp(i global_phase) R(axis, angle) with angle in (0, 2pi) and
/// global_phase in (-pi/2, pi/2] (principal square root of det U).
/// The alternative representative is (-axis, 2pi - angle) with the phase
/// shifted by pi.
#[derive(Debug, Clone, Copy)]
pub struct AxisAngle {
    pub axis: BlochVector,
    pub angle: f64,
    pub global_phase: f64,
}

/// 2x2 unitary gate. Constructors guarantee unitarity analytically;
/// [`Unitary2::try_from_mat`] validates it numerically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2 {
    m: Mat2,
}

impl Unitary2 {
    pub fn identity() -> Self {
        Unitary2 {
            m: Mat2::identity(),
        }
    }

    /// R(axis, angle) = cos(angle/2) I - i sin(angle/2) (axis . sigma).
    /// det R = 1 analytically; `angle` may be negative or exceed 2pi.
    pub fn rotation(axis: &BlochVector, angle: f64) -> Self {
        let (s, co) = (angle / 2.0).sin_cos();
        let [mx, my, mz] = axis.components();
        Unitary2 {
            m: Mat2::new(
                c(co, -s * mz),
                c(-s * my, -s * mx),
                c(s * my, -s * mx),
                c(co, s * mz),
            ),
        }
    }

    /// Validates U^dag U = I and |det U| = 1, both within 1e-12.
    pub fn try_from_mat(m: Mat2) -> Result<Self> {
        let defect = m.dagger().mul(&m).sub(&Mat2::identity()).frobenius_norm();
        let det_defect = (m.det().norm() - 1.0).abs();
        let worst = defect.max(det_defect);
        if worst > 1e-12 {
            return Err(PulseError::NotStructured {
                expected: "unitary",
                defect: worst,
            });
        }
        Ok(Unitary2 { m })
    }

    pub fn mat(&self) -> &Mat2 {
        &self.m
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.m.entry(row, col)
    }

    /// self * other (matrix product; `other` acts first on states).
    pub fn mul(&self, other: &Unitary2) -> Unitary2 {
        Unitary2 {
            m: self.m.mul(&other.m),
        }
    }

    pub fn dagger(&self) -> Unitary2 {
        Unitary2 {
            m: self.m.dagger(),
        }
    }

    pub fn scale_phase(&self, phase: f64) -> Unitary2 {
        Unitary2 {
            m: self.m.scale(Complex64::from_polar(1.0, phase)),
        }
    }

    pub fn apply(&self, v: &Ket2) -> Ket2 {
        self.m.apply(v)
    }

    /// Canonical (axis, angle, global phase) extraction, the inverse of
    /// [`Unitary2::rotation`] up to the documented branch.
    ///
    /// Fails with [`PulseError::DegenerateRotation`] when the rotation angle
    /// is 0 mod 2pi within |sin(angle/2)| < 1e-8 (U proportional to I).
    pub fn axis_angle(&self) -> Result<AxisAngle> {
        let global_phase = self.m.det().arg() / 2.0;
        let v = self.m.scale(Complex64::from_polar(1.0, -global_phase));
        let half_cos = v.trace().re / 2.0;
        // i (V - (Tr V / 2) I) = sin(angle/2) (m . sigma); reading
        // sin(angle/2) off the traceless part keeps full precision near the
        // degenerate point, where acos of the trace would amplify rounding.
        let traceless = v
            .sub(&Mat2::identity().scale(v.trace() / c(2.0, 0.0)))
            .scale(c(0.0, 1.0));
        let w = traceless.add(&traceless.dagger()).scale(c(0.5, 0.0));
        let smx = w.entry(0, 1).re;
        let smy = -w.entry(0, 1).im;
        let smz = w.entry(0, 0).re;
        let s = (smx * smx + smy * smy + smz * smz).sqrt();
        if s < AXIS_DEGENERACY_TOL {
            return Err(PulseError::DegenerateRotation);
        }
        let axis = BlochVector::normalized(smx, smy, smz)?;
        Ok(AxisAngle {
            axis,
            angle: 2.0 * s.atan2(half_cos),
            global_phase,
        })
    }

    /// |Tr(U^dag V)| / 2, invariant under a global phase on either argument.
    pub fn trace_fidelity(&self, other: &Unitary2) -> f64 {
        (self.m.dagger().mul(&other.m).trace().norm() / 2.0).clamp(0.0, 1.0)
    }

    /// sqrt(4 - 2 |Tr(U^dag V)|): the Frobenius distance minimized over a
    /// global phase. Zero iff U = exp(i a) V.
    ///
    /// Evaluated as ||U^dag V - exp(i a*) I||_F at the optimal phase a*,
    /// which is the same quantity without the catastrophic cancellation of
    /// the trace form near zero distance.
    pub fn distance_up_to_phase(&self, other: &Unitary2) -> f64 {
        let w = self.m.dagger().mul(&other.m);
        let tr = w.trace();
        let phase = if tr.norm() > 0.0 {
            tr / tr.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        w.sub(&Mat2::identity().scale(phase)).frobenius_norm()
    }
}

/// Wraps an angle to the branch (-pi, pi].
pub fn wrap_angle(x: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    let y = x.rem_euclid(two_pi);
    if y > std::f64::consts::PI {
        y - two_pi
    } else {
        y
    }
}

/// |a - b| measured mod 2pi, for comparing phases on different branches.
pub fn angle_distance_mod_2pi(a: f64, b: f64) -> f64 {
    wrap_angle(a - b).abs()
}
