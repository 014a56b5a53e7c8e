//! Four-port scattering amplitudes.
//!
//! Port geometry: waveguide `a` carries ports 1 (left end) and 2 (right
//! end), waveguide `b` carries ports 4 (left end) and 3 (right end). A
//! photon injected at port 1 is a right-mover in `a`; it reaches port 2 by
//! the direct path, port 3 as a right-mover in `b`, port 4 as a left-mover
//! in `b`, and port 1 again only if reflected.
//!
//! Coupling structure: the first resonator's CW mode talks to the
//! right-mover of `a` and its CCW mode to the left-mover; the second
//! resonator's CW mode talks to the left-mover of `b` and its CCW mode to
//! the right-mover. J couples F_CW with D_CCW and F_CCW with D_CW.
//!
//! Two independent routes compute the same matrix when χ = 0: the general
//! resolvent [`smatrix`] and the explicit amplitudes [`closed_form_smatrix`].

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::model::ReducedParams;

/// Resolvents with a 1-norm condition number above this are reported as singular.
pub const MAX_CONDITION: f64 = 1e12;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Port {
    P1,
    P2,
    P3,
    P4,
}

impl Port {
    pub const ALL: [Port; 4] = [Port::P1, Port::P2, Port::P3, Port::P4];

    pub fn index(self) -> usize {
        self as usize
    }

    /// 1-based port number.
    pub fn number(self) -> u8 {
        self as u8 + 1
    }

    pub fn from_number(n: u8) -> Option<Port> {
        match n {
            1 => Some(Port::P1),
            2 => Some(Port::P2),
            3 => Some(Port::P3),
            4 => Some(Port::P4),
            _ => None,
        }
    }

    /// Port reached by the bare waveguide (no resonator interaction).
    pub fn direct_exit(self) -> Port {
        match self {
            Port::P1 => Port::P2,
            Port::P2 => Port::P1,
            Port::P3 => Port::P4,
            Port::P4 => Port::P3,
        }
    }
}

impl fmt::Display for Port {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// Resonator modes in resolvent row/column order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeIndex {
    FCw,
    FCcw,
    DCw,
    DCcw,
}

impl ModeIndex {
    pub const ALL: [ModeIndex; 4] = [
        ModeIndex::FCw,
        ModeIndex::FCcw,
        ModeIndex::DCw,
        ModeIndex::DCcw,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Mode driven by a photon injected at `port`.
    pub fn fed_by(port: Port) -> ModeIndex {
        match port {
            Port::P1 => ModeIndex::FCw,
            Port::P2 => ModeIndex::FCcw,
            Port::P3 => ModeIndex::DCw,
            Port::P4 => ModeIndex::DCcw,
        }
    }

    /// Mode that emits into `port`.
    pub fn emits_to(port: Port) -> ModeIndex {
        match port {
            Port::P1 => ModeIndex::FCcw,
            Port::P2 => ModeIndex::FCw,
            Port::P3 => ModeIndex::DCcw,
            Port::P4 => ModeIndex::DCw,
        }
    }
}

/// Port-to-port amplitudes at one detuning.
///
/// `entries[j][i]` is the amplitude t_{i→j} for a photon injected at port
/// i + 1 and leaving at port j + 1, so each column belongs to one input.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SMatrix {
    pub entries: [[Complex64; 4]; 4],
    pub delta: f64,
}

impl SMatrix {
    pub fn identity(delta: f64) -> Self {
        let mut entries = [[ZERO; 4]; 4];
        for (k, row) in entries.iter_mut().enumerate() {
            row[k] = ONE;
        }
        SMatrix { entries, delta }
    }

    pub fn t(&self, from: Port, to: Port) -> Complex64 {
        self.entries[to.index()][from.index()]
    }

    /// max |(S†S − I)_{rc}|.
    pub fn unitarity_defect(&self) -> f64 {
        let s = &self.entries;
        let mut worst: f64 = 0.0;
        for r in 0..4 {
            for c in 0..4 {
                let sum: Complex64 = (0..4).map(|k| s[k][r].conj() * s[k][c]).sum();
                let want = if r == c { ONE } else { ZERO };
                worst = worst.max((sum - want).norm());
            }
        }
        worst
    }

    /// max over inputs of |Σ_j |t_{i→j}|² − 1|.
    pub fn probability_defect(&self) -> f64 {
        (0..4)
            .map(|c| ((0..4).map(|r| self.entries[r][c].norm_sqr()).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &SMatrix) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..4 {
            for c in 0..4 {
                worst = worst.max((self.entries[r][c] - other.entries[r][c]).norm());
            }
        }
        worst
    }

    pub fn transmission(&self) -> Transmission {
        transmission(self)
    }
}

/// Transmission probabilities T_{i→j} = |t_{i→j}|², same layout as [`SMatrix`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Transmission(pub [[f64; 4]; 4]);

impl Transmission {
    pub fn get(&self, from: Port, to: Port) -> f64 {
        self.0[to.index()][from.index()]
    }

    pub fn column_sum(&self, from: Port) -> f64 {
        (0..4).map(|r| self.0[r][from.index()]).sum()
    }

    pub fn max_abs_diff(&self, other: &Transmission) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..4 {
            for c in 0..4 {
                worst = worst.max((self.0[r][c] - other.0[r][c]).abs());
            }
        }
        worst
    }

    pub fn transpose(&self) -> Transmission {
        let mut out = [[0.0; 4]; 4];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = self.0[c][r];
            }
        }
        Transmission(out)
    }
}

pub fn transmission(s: &SMatrix) -> Transmission {
    let mut t = [[0.0; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            t[r][c] = s.entries[r][c].norm_sqr();
        }
    }
    Transmission(t)
}

/// Non-Hermitian mode matrix in the detuning frame.
///
/// Complex-symmetric: the backscattering χ is real and the J couplings are
/// reciprocal.
pub fn effective_hamiltonian(rp: &ReducedParams) -> Result<Mat<4>> {
    rp.validate()?;
    use ModeIndex::*;
    let mut m = linalg::zeros::<4>();
    let diag = [
        (FCw, Complex64::new(-rp.delta_f1, -rp.gamma_a)),
        (FCcw, Complex64::new(rp.delta_f1, -rp.gamma_a)),
        (DCw, Complex64::new(-rp.delta_f2, -rp.gamma_b)),
        (DCcw, Complex64::new(rp.delta_f2, -rp.gamma_b)),
    ];
    for (mode, v) in diag {
        m[mode.index()][mode.index()] = v;
    }
    let mut couple = |a: ModeIndex, b: ModeIndex, v: f64| {
        m[a.index()][b.index()] = Complex64::new(v, 0.0);
        m[b.index()][a.index()] = Complex64::new(v, 0.0);
    };
    couple(FCw, FCcw, rp.chi_1);
    couple(DCw, DCcw, rp.chi_2);
    couple(FCw, DCcw, rp.j);
    couple(FCcw, DCw, rp.j);
    Ok(m)
}

fn resolvent<const N: usize>(m: &Mat<N>, delta: f64) -> Result<Mat<N>> {
    if !delta.is_finite() {
        return Err(Error::invalid(
            "delta",
            format!("must be finite, got {delta}"),
        ));
    }
    let mut a = linalg::zeros::<N>();
    for r in 0..N {
        for c in 0..N {
            a[r][c] = -m[r][c];
        }
        a[r][r] += delta;
    }
    match linalg::inverse(&a) {
        Some((inv, cond)) if cond <= MAX_CONDITION && cond.is_finite() => Ok(inv),
        Some((_, cond)) => Err(Error::SingularResolvent {
            delta,
            condition: cond,
        }),
        None => Err(Error::SingularResolvent {
            delta,
            condition: f64::INFINITY,
        }),
    }
}

/// S(δ) = C − i K_out (δ − M)⁻¹ K_inᵀ for any backscattering.
pub fn smatrix(rp: &ReducedParams, delta: f64) -> Result<SMatrix> {
    let m = effective_hamiltonian(rp)?;
    let g = resolvent(&m, delta)?;
    let weight = |p: Port| match p {
        Port::P1 | Port::P2 => (2.0 * rp.gamma_a).sqrt(),
        Port::P3 | Port::P4 => (2.0 * rp.gamma_b).sqrt(),
    };
    let mut entries = [[ZERO; 4]; 4];
    for from in Port::ALL {
        for to in Port::ALL {
            let direct = if to == from.direct_exit() { ONE } else { ZERO };
            let via = g[ModeIndex::emits_to(to).index()][ModeIndex::fed_by(from).index()];
            entries[to.index()][from.index()] = direct - I * weight(to) * weight(from) * via;
        }
    }
    Ok(SMatrix { entries, delta })
}

/// Through and cross amplitudes of one driven resonator mode hybridized
/// with its J-partner: returns (through, cross) for
///
/// through = [(δ + s_o − iΓ_o)(δ − s_p + iΓ_p) − J²] / [(δ + s_o + iΓ_o)(δ − s_p + iΓ_p) − J²]
/// cross   = −2i √(Γ_o Γ_p) J / (same denominator)
fn hybrid_pair(
    delta: f64,
    shift_own: f64,
    gamma_own: f64,
    shift_partner: f64,
    gamma_partner: f64,
    j: f64,
) -> (Complex64, Complex64) {
    let own = Complex64::new(delta + shift_own, gamma_own);
    let own_conj = Complex64::new(delta + shift_own, -gamma_own);
    let partner = Complex64::new(delta - shift_partner, gamma_partner);
    let j2 = j * j;
    let den = own * partner - j2;
    let through = (own_conj * partner - j2) / den;
    let cross = -2.0 * I * (gamma_own * gamma_partner).sqrt() * j / den;
    (through, cross)
}

/// Explicit amplitudes for χ₁ = χ₂ = 0.
///
/// Ports 3/4 follow from ports 1/2 by exchanging the roles of the two
/// resonators, (Γa, Δ_F1) ↔ (Γb, Δ_F2). Amplitudes forbidden by the
/// coupling topology are exact zeros.
pub fn closed_form_smatrix(rp: &ReducedParams, delta: f64) -> Result<SMatrix> {
    rp.validate()?;
    if rp.has_backscatter() {
        return Err(Error::Precondition(format!(
            "closed-form amplitudes need chi_1 = chi_2 = 0 (got {}, {})",
            rp.chi_1, rp.chi_2
        )));
    }
    if !delta.is_finite() {
        return Err(Error::invalid(
            "delta",
            format!("must be finite, got {delta}"),
        ));
    }
    let (ga, gb, d1, d2, j) = (rp.gamma_a, rp.gamma_b, rp.delta_f1, rp.delta_f2, rp.j);

    let (t12, t13) = hybrid_pair(delta, d1, ga, d2, gb, j);
    let (t21, t24) = hybrid_pair(delta, -d1, ga, -d2, gb, j);
    let (t34, t31) = hybrid_pair(delta, d2, gb, d1, ga, j);
    let (t43, t42) = hybrid_pair(delta, -d2, gb, -d1, ga, j);

    let mut s = SMatrix {
        entries: [[ZERO; 4]; 4],
        delta,
    };
    let mut put = |from: Port, to: Port, v: Complex64| s.entries[to.index()][from.index()] = v;
    use Port::*;
    put(P1, P2, t12);
    put(P1, P3, t13);
    put(P2, P1, t21);
    put(P2, P4, t24);
    put(P3, P4, t34);
    put(P3, P1, t31);
    put(P4, P3, t43);
    put(P4, P2, t42);
    Ok(s)
}

/// One resonator side-coupled to both waveguides.
///
/// Its CW mode talks to the right-mover of `a` and the left-mover of `b`;
/// its CCW mode to the left-mover of `a` and the right-mover of `b`. Both
/// modes decay at Γa + Γb.
pub fn single_resonator_smatrix(
    gamma_a: f64,
    gamma_b: f64,
    delta_f: f64,
    chi: f64,
    delta: f64,
) -> Result<SMatrix> {
    ReducedParams {
        gamma_a,
        gamma_b,
        j: 0.0,
        delta_f1: delta_f,
        delta_f2: 0.0,
        chi_1: chi,
        chi_2: 0.0,
    }
    .validate()?;

    const CW: usize = 0;
    const CCW: usize = 1;
    let total = gamma_a + gamma_b;
    let m: Mat<2> = [
        [Complex64::new(-delta_f, -total), Complex64::new(chi, 0.0)],
        [Complex64::new(chi, 0.0), Complex64::new(delta_f, -total)],
    ];
    let g = resolvent(&m, delta)?;
    let fed_by = |p: Port| match p {
        Port::P1 | Port::P3 => CW,
        Port::P2 | Port::P4 => CCW,
    };
    let emits_to = |p: Port| match p {
        Port::P2 | Port::P4 => CW,
        Port::P1 | Port::P3 => CCW,
    };
    let weight = |p: Port| match p {
        Port::P1 | Port::P2 => (2.0 * gamma_a).sqrt(),
        Port::P3 | Port::P4 => (2.0 * gamma_b).sqrt(),
    };
    let mut entries = [[ZERO; 4]; 4];
    for from in Port::ALL {
        for to in Port::ALL {
            let direct = if to == from.direct_exit() { ONE } else { ZERO };
            entries[to.index()][from.index()] =
                direct - I * weight(to) * weight(from) * g[emits_to(to)][fed_by(from)];
        }
    }
    Ok(SMatrix { entries, delta })
}
