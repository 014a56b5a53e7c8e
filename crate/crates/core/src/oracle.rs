//! Reference scattering amplitudes from the real-space eigenvalue problem.
//!
//! Each waveguide field is a plane wave on either side of its coupling
//! point x = 0. Integrating the first-order chiral wave equation across the
//! delta coupling gives a jump condition, and the field seen by the
//! resonator at x = 0 is the average of the left and right limits. Together
//! with the four resonator amplitude equations this closes into an 8×8
//! linear system per input port:
//!
//! unknowns = [C_cw, C_ccw, D_cw, D_ccw, out₁, out₂, out₃, out₄]
//!
//! The system is built directly from the Hamiltonian couplings and solved
//! with nalgebra; nothing here is shared with [`crate::scattering::smatrix`].
//! Units: v_g = 1, so that g = √(2Γ).

use nalgebra::{Complex, SMatrix as NMatrix, SVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::ReducedParams;
use crate::scattering::{Port, SMatrix, MAX_CONDITION};

pub const UNKNOWNS: usize = 8;

// Unknown slots.
const C_CW: usize = 0;
const C_CCW: usize = 1;
const D_CW: usize = 2;
const D_CCW: usize = 3;
const fn out(port: usize) -> usize {
    3 + port
}

/// Assembled steady-state equations for a photon entering one port.
#[derive(Clone, Debug)]
pub struct RealSpaceSystem {
    pub matrix: NMatrix<Complex64, UNKNOWNS, UNKNOWNS>,
    pub rhs: SVector<Complex64, UNKNOWNS>,
    pub input: Port,
}

/// One chiral channel: the waveguide mode of `waveguide_coupling` strength
/// that enters at `in_port`, leaves at `out_port`, and couples to `mode`.
struct Channel {
    in_port: Port,
    out_port: Port,
    mode: usize,
    g: f64,
}

fn channels(rp: &ReducedParams) -> [Channel; 4] {
    let ga = (2.0 * rp.gamma_a).sqrt();
    let gb = (2.0 * rp.gamma_b).sqrt();
    [
        // a right-mover: port 1 → port 2, couples f_cw
        Channel {
            in_port: Port::P1,
            out_port: Port::P2,
            mode: C_CW,
            g: ga,
        },
        // a left-mover: port 2 → port 1, couples f_ccw
        Channel {
            in_port: Port::P2,
            out_port: Port::P1,
            mode: C_CCW,
            g: ga,
        },
        // b left-mover: port 3 → port 4, couples d_cw
        Channel {
            in_port: Port::P3,
            out_port: Port::P4,
            mode: D_CW,
            g: gb,
        },
        // b right-mover: port 4 → port 3, couples d_ccw
        Channel {
            in_port: Port::P4,
            out_port: Port::P3,
            mode: D_CCW,
            g: gb,
        },
    ]
}

impl RealSpaceSystem {
    pub fn assemble(rp: &ReducedParams, delta: f64, input: Port) -> Result<Self> {
        rp.validate()?;
        if !delta.is_finite() {
            return Err(Error::invalid(
                "delta",
                format!("must be finite, got {delta}"),
            ));
        }
        let c = |re: f64| Complex::new(re, 0.0);
        let mut a = NMatrix::<Complex64, UNKNOWNS, UNKNOWNS>::zeros();
        let mut b = SVector::<Complex64, UNKNOWNS>::zeros();

        // (E − ω_mode) amplitude, with ω_cw = ω_c − Δ_F and ω_ccw = ω_c + Δ_F.
        a[(C_CW, C_CW)] = c(delta + rp.delta_f1);
        a[(C_CCW, C_CCW)] = c(delta - rp.delta_f1);
        a[(D_CW, D_CW)] = c(delta + rp.delta_f2);
        a[(D_CCW, D_CCW)] = c(delta - rp.delta_f2);

        // J (f_cw† d_ccw + f_ccw† d_cw + H.c.)
        for (x, y) in [(C_CW, D_CCW), (C_CCW, D_CW)] {
            a[(x, y)] -= c(rp.j);
            a[(y, x)] -= c(rp.j);
        }
        // χ₁ f_cw† f_ccw + χ₂ d_ccw† d_cw + H.c. (real χ)
        a[(C_CW, C_CCW)] -= c(rp.chi_1);
        a[(C_CCW, C_CW)] -= c(rp.chi_1);
        a[(D_CCW, D_CW)] -= c(rp.chi_2);
        a[(D_CW, D_CCW)] -= c(rp.chi_2);

        for ch in channels(rp) {
            let incident = if ch.in_port == input { c(1.0) } else { c(0.0) };
            let o = out(ch.out_port.number() as usize);

            // Mode row: −g · (field(0⁻) + field(0⁺)) / 2
            a[(ch.mode, o)] -= c(ch.g / 2.0);
            b[ch.mode] += incident * (ch.g / 2.0);

            // Jump across the coupling point: out − in + i g · mode = 0
            a[(o, o)] = c(1.0);
            a[(o, ch.mode)] = Complex::new(0.0, ch.g);
            b[o] = incident;
        }

        Ok(RealSpaceSystem {
            matrix: a,
            rhs: b,
            input,
        })
    }

    /// Outgoing amplitudes indexed by exit port.
    pub fn solve(&self, delta: f64) -> Result<[Complex64; 4]> {
        let lu = self.matrix.lu();
        let inv = lu.try_inverse().ok_or(Error::SingularResolvent {
            delta,
            condition: f64::INFINITY,
        })?;
        let cond = norm_1(&self.matrix) * norm_1(&inv);
        if !cond.is_finite() || cond > MAX_CONDITION {
            return Err(Error::SingularResolvent {
                delta,
                condition: cond,
            });
        }
        let x = lu.solve(&self.rhs).ok_or(Error::SingularResolvent {
            delta,
            condition: cond,
        })?;
        Ok(std::array::from_fn(|k| x[out(k + 1)]))
    }
}

fn norm_1(m: &NMatrix<Complex64, UNKNOWNS, UNKNOWNS>) -> f64 {
    m.column_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Full scattering matrix assembled one input port at a time.
pub fn oracle_smatrix(rp: &ReducedParams, delta: f64) -> Result<SMatrix> {
    let mut s = SMatrix {
        entries: [[Complex64::new(0.0, 0.0); 4]; 4],
        delta,
    };
    for input in Port::ALL {
        let outs = RealSpaceSystem::assemble(rp, delta, input)?.solve(delta)?;
        for to in Port::ALL {
            s.entries[to.index()][input.index()] = outs[to.index()];
        }
    }
    Ok(s)
}
