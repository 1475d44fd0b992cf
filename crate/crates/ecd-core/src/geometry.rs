//! Chart-based exact geometry for a vielbein and so(p,q) spin connection on
//! R^4: curvature and torsion 2-forms, the Ricci contraction, the contracted
//! Bianchi identity over the base, the variation of Ricci under a connection
//! shift, the frame contraction producing the Einstein tensor, and the
//! bracket identity for algebra-valued coframes on a 10-chart.
//!
//! Inverse vielbeins and coframes are never formed as global objects; every
//! quantity that needs them is evaluated at rational sample points, where the
//! inverse is exact. Derivatives of inverses use d(E) = -E (d e) E pointwise.

use crate::algebra::{so_basis, wedge_bracket, LieAlgebra, Signature};
use crate::exterior::{Form, Poly};
use crate::linalg::{det, inverse, Mat};
use crate::scalar::{q, qi, Coeff, Q};
use num::Zero;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("vielbein is singular at the sample point")]
    SingularVielbein,
    #[error("coframe is singular at the sample point")]
    SingularCoframe,
}

/// Antisymmetric component array of a 2-form: f_{mn} with f = sum_{m<n}
/// f_{mn} dx^m ^ dx^n extended by f_{nm} = -f_{mn}.
pub fn comp2<C: Coeff>(f: &Form<C>, m: usize, n: usize) -> Poly<C> {
    match m.cmp(&n) {
        std::cmp::Ordering::Less => f.coeff_at(&[m, n]),
        std::cmp::Ordering::Greater => f.coeff_at(&[n, m]).neg(),
        std::cmp::Ordering::Equal => Poly::zero(f.n()),
    }
}

/// Vielbein e^a_mu and spin connection omega^i_mu with polynomial
/// coefficients on a 4-chart, plus registered rational sample points where
/// the vielbein has been checked to be invertible.
#[derive(Clone, Debug)]
pub struct GeometryState {
    pub sig: Signature,
    /// e[a][mu] = e^a_mu
    pub e: Vec<Vec<Poly<Q>>>,
    /// omega[i][mu] = omega^i_mu over the so(p,q) pair basis
    pub omega: Vec<Vec<Poly<Q>>>,
    so: LieAlgebra,
    points: Vec<Vec<Q>>,
}

impl GeometryState {
    pub fn new(sig: Signature, e: Vec<Vec<Poly<Q>>>, omega: Vec<Vec<Poly<Q>>>) -> Self {
        assert_eq!(e.len(), 4);
        assert!(e.iter().all(|row| row.len() == 4));
        assert_eq!(omega.len(), 6);
        assert!(omega.iter().all(|row| row.len() == 4));
        GeometryState { sig, e, omega, so: so_basis(sig), points: Vec::new() }
    }

    /// Identity vielbein, zero connection, origin registered.
    pub fn flat(sig: Signature) -> Self {
        let e = (0..4)
            .map(|a| {
                (0..4)
                    .map(|mu| if a == mu { Poly::one(4) } else { Poly::zero(4) })
                    .collect()
            })
            .collect();
        let omega = vec![vec![Poly::zero(4); 4]; 6];
        let mut st = GeometryState::new(sig, e, omega);
        st.register_point(vec![Q::zero(); 4]).expect("identity vielbein is invertible");
        st
    }

    pub fn so(&self) -> &LieAlgebra {
        &self.so
    }

    /// Register a sample point; fails if det(e) = 0 there.
    pub fn register_point(&mut self, pt: Vec<Q>) -> Result<(), GeometryError> {
        assert_eq!(pt.len(), 4);
        if det(&self.vielbein_at(&pt)).is_zero() {
            return Err(GeometryError::SingularVielbein);
        }
        self.points.push(pt);
        Ok(())
    }

    pub fn points(&self) -> &[Vec<Q>] {
        &self.points
    }

    pub fn e_form(&self, a: usize) -> Form<Q> {
        (0..4).fold(Form::zero(4, 1), |acc, mu| {
            acc.add(&Form::from_indices(4, &[mu], self.e[a][mu].clone()))
        })
    }

    pub fn omega_form(&self, i: usize) -> Form<Q> {
        (0..4).fold(Form::zero(4, 1), |acc, mu| {
            acc.add(&Form::from_indices(4, &[mu], self.omega[i][mu].clone()))
        })
    }

    pub fn vielbein_at(&self, pt: &[Q]) -> Mat<Q> {
        Mat::from_fn(4, 4, |a, mu| self.e[a][mu].eval(pt))
    }

    pub fn inverse_vielbein_at(&self, pt: &[Q]) -> Result<Mat<Q>, GeometryError> {
        inverse(&self.vielbein_at(pt)).ok_or(GeometryError::SingularVielbein)
    }

    /// g_{mu nu} = eta_ab e^a_mu e^b_nu at pt.
    pub fn metric_at(&self, pt: &[Q]) -> Mat<Q> {
        let e = self.vielbein_at(pt);
        Mat::from_fn(4, 4, |mu, nu| {
            (0..4).fold(Q::zero(), |acc, a| {
                acc + self.sig.eta(a) * e.at(a, mu).clone() * e.at(a, nu).clone()
            })
        })
    }

    pub fn inverse_metric_at(&self, pt: &[Q]) -> Result<Mat<Q>, GeometryError> {
        let einv = self.inverse_vielbein_at(pt)?;
        Ok(Mat::from_fn(4, 4, |mu, nu| {
            (0..4).fold(Q::zero(), |acc, a| {
                acc + self.sig.eta(a) * einv.at(mu, a).clone() * einv.at(nu, a).clone()
            })
        }))
    }
}

/// Curvature 2-forms Omega^i = d omega + 1/2 [omega ^ omega] and torsion
/// 2-forms Theta^a = de^a + rho^a_{i,b} omega^i ^ e^b, exact.
#[derive(Clone, Debug)]
pub struct CurvatureData {
    pub omega2: Vec<Form<Q>>,
    pub theta: Vec<Form<Q>>,
}

impl CurvatureData {
    pub fn omega_comp(&self, i: usize, m: usize, n: usize) -> Poly<Q> {
        comp2(&self.omega2[i], m, n)
    }

    pub fn theta_comp(&self, a: usize, m: usize, n: usize) -> Poly<Q> {
        comp2(&self.theta[a], m, n)
    }
}

pub fn curvature(st: &GeometryState) -> CurvatureData {
    let om: Vec<Form<Q>> = (0..6).map(|i| st.omega_form(i)).collect();
    let br = wedge_bracket(&om, &om, &st.so);
    let omega2 = (0..6).map(|i| om[i].d().add(&br[i].scale_q(&q(1, 2)))).collect();
    let theta = (0..4)
        .map(|a| {
            let mut f = st.e_form(a).d();
            for i in 0..6 {
                for b in 0..4 {
                    let r = st.so.rho[i].at(a, b);
                    if r.is_zero() {
                        continue;
                    }
                    f = f.add(&om[i].wedge(&st.e_form(b)).scale_q(r));
                }
            }
            f
        })
        .collect();
    CurvatureData { omega2, theta }
}

/// Frame curvature Riem^a_{b mu nu} = rho^a_{i,b} Omega^i_{mu nu}.
pub fn riemann_comp(st: &GeometryState, cd: &CurvatureData, a: usize, b: usize, m: usize, n: usize) -> Poly<Q> {
    let mut out = Poly::zero(4);
    for i in 0..6 {
        let r = st.so.rho[i].at(a, b);
        if !r.is_zero() {
            out = out.add(&cd.omega_comp(i, m, n).scale_q(r));
        }
    }
    out
}

// trace over the first 2-form index through the inverse vielbein:
// out_{mu nu} = E^pi_a rho^a_{i,b} e^b_nu F^i_{pi mu}
fn trace_first_at(st: &GeometryState, forms: &[Form<Q>], pt: &[Q]) -> Result<Mat<Q>, GeometryError> {
    let e = st.vielbein_at(pt);
    let einv = inverse(&e).ok_or(GeometryError::SingularVielbein)?;
    let comp: Vec<Vec<Vec<Q>>> = forms
        .iter()
        .map(|f| {
            (0..4)
                .map(|m| (0..4).map(|n| comp2(f, m, n).eval(pt)).collect())
                .collect()
        })
        .collect();
    let mut out = Mat::zero(4, 4);
    for mu in 0..4 {
        for nu in 0..4 {
            let mut acc = Q::zero();
            for (i, ci) in comp.iter().enumerate() {
                for pi in 0..4 {
                    if ci[pi][mu].is_zero() {
                        continue;
                    }
                    for a in 0..4 {
                        for b in 0..4 {
                            let r = st.so.rho[i].at(a, b);
                            if r.is_zero() {
                                continue;
                            }
                            acc += einv.at(pi, a).clone()
                                * r.clone()
                                * e.at(b, nu).clone()
                                * ci[pi][mu].clone();
                        }
                    }
                }
            }
            out.set(mu, nu, acc);
        }
    }
    Ok(out)
}

/// Ricci tensor Ric_{mu nu} = E^pi_a rho^a_{i,b} e^b_nu Omega^i_{pi mu}
/// (trace over the first 2-form index) and Scal = g^{mu nu} Ric_{mu nu}.
pub fn ricci_at(st: &GeometryState, pt: &[Q]) -> Result<(Mat<Q>, Q), GeometryError> {
    let cd = curvature(st);
    let ric = trace_first_at(st, &cd.omega2, pt)?;
    let ginv = st.inverse_metric_at(pt)?;
    let mut scal = Q::zero();
    for mu in 0..4 {
        for nu in 0..4 {
            scal += ginv.at(mu, nu).clone() * ric.at(mu, nu).clone();
        }
    }
    Ok((ric, scal))
}

/// Connection coefficients of the vielbein-transported connection,
/// Gamma^pi_{mu nu} = E^pi_a (d_mu e^a_nu + omega^i_mu rho^a_{i,b} e^b_nu),
/// as matrices gam[pi].at(mu, nu).
pub fn gamma_at(st: &GeometryState, pt: &[Q]) -> Result<Vec<Mat<Q>>, GeometryError> {
    let e = st.vielbein_at(pt);
    let einv = inverse(&e).ok_or(GeometryError::SingularVielbein)?;
    let omval: Vec<Vec<Q>> =
        (0..6).map(|i| (0..4).map(|mu| st.omega[i][mu].eval(pt)).collect()).collect();
    let mut dmat = vec![Mat::zero(4, 4); 4];
    for a in 0..4 {
        for mu in 0..4 {
            for nu in 0..4 {
                let mut v = st.e[a][nu].partial(mu).eval(pt);
                for i in 0..6 {
                    if omval[i][mu].is_zero() {
                        continue;
                    }
                    for b in 0..4 {
                        let r = st.so.rho[i].at(a, b);
                        if !r.is_zero() {
                            v += omval[i][mu].clone() * r.clone() * e.at(b, nu).clone();
                        }
                    }
                }
                dmat[a].set(mu, nu, v);
            }
        }
    }
    Ok((0..4)
        .map(|pi| {
            Mat::from_fn(4, 4, |mu, nu| {
                (0..4).fold(Q::zero(), |acc, a| {
                    acc + einv.at(pi, a).clone() * dmat[a].at(mu, nu).clone()
                })
            })
        })
        .collect())
}

/// Coordinate torsion T^pi_{mu nu} = Gamma^pi_{mu nu} - Gamma^pi_{nu mu}.
pub fn torsion_at(st: &GeometryState, pt: &[Q]) -> Result<Vec<Mat<Q>>, GeometryError> {
    let gam = gamma_at(st, pt)?;
    Ok(gam.iter().map(|g| g.sub(&g.transpose())).collect())
}

/// tr(T)_mu = T^nu_{nu mu}.
pub fn torsion_trace_at(st: &GeometryState, pt: &[Q]) -> Result<Vec<Q>, GeometryError> {
    let t = torsion_at(st, pt)?;
    Ok((0..4)
        .map(|mu| (0..4).fold(Q::zero(), |acc, nu| acc + t[nu].at(nu, mu).clone()))
        .collect())
}

// pointwise first-order data of the torsion tensor, shared by the divergence
// and the differential of the trace
struct TorsionJet {
    einv: Mat<Q>,
    dinv: Vec<Mat<Q>>,            // d_pi E = -E (d_pi e) E
    cval: Vec<Vec<Vec<Q>>>,       // Theta^a_{mn} at pt
    dcval: Vec<Vec<Vec<Vec<Q>>>>, // [pi][a][m][n] = d_pi Theta^a_{mn} at pt
    t: Vec<Mat<Q>>,               // T^pi_{mn}
    gam: Vec<Mat<Q>>,
}

fn torsion_jet(st: &GeometryState, pt: &[Q]) -> Result<TorsionJet, GeometryError> {
    let e = st.vielbein_at(pt);
    let einv = inverse(&e).ok_or(GeometryError::SingularVielbein)?;
    let cd = curvature(st);
    let cpoly: Vec<Vec<Vec<Poly<Q>>>> = (0..4)
        .map(|a| {
            (0..4)
                .map(|m| (0..4).map(|n| cd.theta_comp(a, m, n)).collect())
                .collect()
        })
        .collect();
    let cval: Vec<Vec<Vec<Q>>> = cpoly
        .iter()
        .map(|pa| pa.iter().map(|pm| pm.iter().map(|p| p.eval(pt)).collect()).collect())
        .collect();
    let dcval: Vec<Vec<Vec<Vec<Q>>>> = (0..4)
        .map(|pi| {
            cpoly
                .iter()
                .map(|pa| {
                    pa.iter()
                        .map(|pm| pm.iter().map(|p| p.partial(pi).eval(pt)).collect())
                        .collect()
                })
                .collect()
        })
        .collect();
    let dinv: Vec<Mat<Q>> = (0..4)
        .map(|pi| {
            let de = Mat::from_fn(4, 4, |a, mu| st.e[a][mu].partial(pi).eval(pt));
            einv.mul(&de).mul(&einv).neg()
        })
        .collect();
    let gam = gamma_at(st, pt)?;
    let t: Vec<Mat<Q>> = (0..4)
        .map(|pi| {
            Mat::from_fn(4, 4, |m, n| {
                (0..4).fold(Q::zero(), |acc, a| acc + einv.at(pi, a).clone() * cval[a][m][n].clone())
            })
        })
        .collect();
    // the 2-form route and the Gamma route must produce the same torsion
    debug_assert!(
        (0..4).all(|pi| t[pi] == gam[pi].sub(&gam[pi].transpose())),
        "torsion routes disagree"
    );
    Ok(TorsionJet { einv, dinv, cval, dcval, t, gam })
}

fn divergence_from(jet: &TorsionJet) -> Mat<Q> {
    let mut out = Mat::zero(4, 4);
    for m in 0..4 {
        for n in 0..4 {
            let mut acc = Q::zero();
            for pi in 0..4 {
                for a in 0..4 {
                    acc += jet.dinv[pi].at(pi, a).clone() * jet.cval[a][m][n].clone()
                        + jet.einv.at(pi, a).clone() * jet.dcval[pi][a][m][n].clone();
                }
            }
            for pi in 0..4 {
                for s in 0..4 {
                    acc += jet.gam[pi].at(pi, s).clone() * jet.t[s].at(m, n).clone();
                    acc -= jet.gam[s].at(pi, m).clone() * jet.t[pi].at(s, n).clone();
                    acc -= jet.gam[s].at(pi, n).clone() * jet.t[pi].at(m, s).clone();
                }
            }
            out.set(m, n, acc);
        }
    }
    out
}

fn dtrace_from(jet: &TorsionJet) -> Mat<Q> {
    // grad(mu, nu) = d_mu tr(T)_nu through the product rule
    let grad = Mat::from_fn(4, 4, |mu, nu| {
        let mut acc = Q::zero();
        for pi in 0..4 {
            for a in 0..4 {
                acc += jet.dinv[mu].at(pi, a).clone() * jet.cval[a][pi][nu].clone()
                    + jet.einv.at(pi, a).clone() * jet.dcval[mu][a][pi][nu].clone();
            }
        }
        acc
    });
    grad.sub(&grad.transpose())
}

/// Covariant divergence div(T)_{mu nu} = nabla_pi T^pi_{mu nu} with the full
/// connection: d_pi T + Gamma^pi_{pi s} T^s - Gamma^s_{pi mu} T^pi_{s nu}
/// - Gamma^s_{pi nu} T^pi_{mu s}, evaluated exactly.
pub fn covariant_div_torsion_at(st: &GeometryState, pt: &[Q]) -> Result<Mat<Q>, GeometryError> {
    Ok(divergence_from(&torsion_jet(st, pt)?))
}

/// (d tr T)_{mu nu} = d_mu tr(T)_nu - d_nu tr(T)_mu at pt.
pub fn dtrace_torsion_at(st: &GeometryState, pt: &[Q]) -> Result<Mat<Q>, GeometryError> {
    Ok(dtrace_from(&torsion_jet(st, pt)?))
}

#[cfg(debug_assertions)]
fn quadratic_torsion_lemma_holds(st: &GeometryState, jet: &TorsionJet, pt: &[Q]) -> bool {
    // frame components T^c_{de}: the contraction tr(T .| T) + T .| tr(T) = 0
    let e = st.vielbein_at(pt);
    let mut that = vec![Mat::zero(4, 4); 4];
    for c in 0..4 {
        for d in 0..4 {
            for f in 0..4 {
                let mut v = Q::zero();
                for pi in 0..4 {
                    for m in 0..4 {
                        for n in 0..4 {
                            v += e.at(c, pi).clone()
                                * jet.t[pi].at(m, n).clone()
                                * jet.einv.at(m, d).clone()
                                * jet.einv.at(n, f).clone();
                        }
                    }
                }
                that[c].set(d, f, v);
            }
        }
    }
    let tr: Vec<Q> =
        (0..4).map(|d| (0..4).fold(Q::zero(), |s, c| s + that[c].at(c, d).clone())).collect();
    for a in 0..4 {
        for b in 0..4 {
            let mut acc = Q::zero();
            for c in 0..4 {
                for d in 0..4 {
                    acc += that[c].at(d, c).clone() * that[d].at(a, b).clone()
                        + that[c].at(d, a).clone() * that[d].at(b, c).clone()
                        + that[c].at(d, b).clone() * that[d].at(c, a).clone();
                }
            }
            for d in 0..4 {
                acc += tr[d].clone() * that[d].at(a, b).clone();
            }
            if !acc.is_zero() {
                return false;
            }
        }
    }
    true
}

/// Ric_{mu nu} - Ric_{nu mu} - (div(T)_{mu nu} - d tr(T)_{mu nu}) at pt;
/// identically zero for every metric-compatible state.
pub fn bianchi_residual(st: &GeometryState, pt: &[Q]) -> Result<Mat<Q>, GeometryError> {
    let (ric, _) = ricci_at(st, pt)?;
    let jet = torsion_jet(st, pt)?;
    #[cfg(debug_assertions)]
    debug_assert!(quadratic_torsion_lemma_holds(st, &jet, pt));
    let div = divergence_from(&jet);
    let dtr = dtrace_from(&jet);
    Ok(Mat::from_fn(4, 4, |mu, nu| {
        ric.at(mu, nu).clone() - ric.at(nu, mu).clone()
            - (div.at(mu, nu).clone() - dtr.at(mu, nu).clone())
    }))
}

/// Ric(omega + tau) - Ric(omega) - tr(d^omega tau + 1/2 [tau ^ tau]) at pt,
/// with the same first-index trace as the Ricci contraction. Zero for every
/// state and shift.
pub fn ricci_variation(
    st: &GeometryState,
    tau: &[Vec<Poly<Q>>],
    pt: &[Q],
) -> Result<Mat<Q>, GeometryError> {
    assert_eq!(tau.len(), 6);
    assert!(tau.iter().all(|row| row.len() == 4));
    let shifted: Vec<Vec<Poly<Q>>> = (0..6)
        .map(|i| (0..4).map(|mu| st.omega[i][mu].add(&tau[i][mu])).collect())
        .collect();
    let st2 = GeometryState::new(st.sig, st.e.clone(), shifted);
    let (r1, _) = ricci_at(st, pt)?;
    let (r2, _) = ricci_at(&st2, pt)?;
    let om: Vec<Form<Q>> = (0..6).map(|i| st.omega_form(i)).collect();
    let tf: Vec<Form<Q>> = (0..6)
        .map(|i| {
            (0..4).fold(Form::zero(4, 1), |acc, mu| {
                acc.add(&Form::from_indices(4, &[mu], tau[i][mu].clone()))
            })
        })
        .collect();
    // d^omega tau = d tau + [omega ^ tau] (unhalved: the two cross terms of
    // the curvature expansion coincide for 1-forms)
    let br_ot = wedge_bracket(&om, &tf, &st.so);
    let br_tt = wedge_bracket(&tf, &tf, &st.so);
    let f: Vec<Form<Q>> = (0..6)
        .map(|i| tf[i].d().add(&br_ot[i]).add(&br_tt[i].scale_q(&q(1, 2))))
        .collect();
    let trf = trace_first_at(st, &f, pt)?;
    Ok(r2.sub(&r1).sub(&trf))
}

/// Residual of [p_i^{bc} Omega^i_{ab} + 1/2 delta^c_a p_i^{de} Omega^i_{de}]
/// - [-2 Ric_a{}^c + delta^c_a Scal] in frame indices at pt.
pub fn einstein_contraction(st: &GeometryState, pt: &[Q]) -> Result<Mat<Q>, GeometryError> {
    let cd = curvature(st);
    let einv = st.inverse_vielbein_at(pt)?;
    let mut ohat = vec![Mat::zero(4, 4); 6];
    for i in 0..6 {
        let val: Vec<Vec<Q>> = (0..4)
            .map(|m| (0..4).map(|n| cd.omega_comp(i, m, n).eval(pt)).collect())
            .collect();
        for a in 0..4 {
            for b in 0..4 {
                let mut acc = Q::zero();
                for (m, vm) in val.iter().enumerate() {
                    for (n, v) in vm.iter().enumerate() {
                        if !v.is_zero() {
                            acc += v.clone() * einv.at(m, a).clone() * einv.at(n, b).clone();
                        }
                    }
                }
                ohat[i].set(a, b, acc);
            }
        }
    }
    let (ric, scal) = ricci_at(st, pt)?;
    let richat = Mat::from_fn(4, 4, |a, b| {
        let mut acc = Q::zero();
        for m in 0..4 {
            for n in 0..4 {
                acc += einv.at(m, a).clone() * einv.at(n, b).clone() * ric.at(m, n).clone();
            }
        }
        acc
    });
    let mut half_trace = Q::zero();
    for i in 0..6 {
        for d in 0..4 {
            for ee in 0..4 {
                half_trace += q(1, 2) * st.so.p_mult(i).at(d, ee).clone() * ohat[i].at(d, ee).clone();
            }
        }
    }
    let mut out = Mat::zero(4, 4);
    for a in 0..4 {
        for c in 0..4 {
            let mut lhs = Q::zero();
            for i in 0..6 {
                for b in 0..4 {
                    lhs += st.so.p_mult(i).at(b, c).clone() * ohat[i].at(a, b).clone();
                }
            }
            if a == c {
                lhs += half_trace.clone();
            }
            let mut rhs = qi(-2) * richat.at(a, c).clone() * st.sig.eta(c);
            if a == c {
                rhs += scal.clone();
            }
            out.set(a, c, lhs - rhs);
        }
    }
    Ok(out)
}

/// Residual of the companion contraction: the frame components
/// Theta^c_{de} + delta^c_e Theta^f_{fd} - delta^c_d Theta^f_{fe} from the
/// torsion 2-form against the same shape built from the coordinate tensor
/// T + tr(T) ^ Id transported to the frame.
pub fn torsion_trace_companion(st: &GeometryState, pt: &[Q]) -> Result<Vec<Mat<Q>>, GeometryError> {
    let cd = curvature(st);
    let e = st.vielbein_at(pt);
    let einv = inverse(&e).ok_or(GeometryError::SingularVielbein)?;
    let mut that = vec![Mat::zero(4, 4); 4];
    for c in 0..4 {
        let val: Vec<Vec<Q>> = (0..4)
            .map(|m| (0..4).map(|n| cd.theta_comp(c, m, n).eval(pt)).collect())
            .collect();
        for d in 0..4 {
            for f in 0..4 {
                let mut acc = Q::zero();
                for (m, vm) in val.iter().enumerate() {
                    for (n, v) in vm.iter().enumerate() {
                        if !v.is_zero() {
                            acc += v.clone() * einv.at(m, d).clone() * einv.at(n, f).clone();
                        }
                    }
                }
                that[c].set(d, f, acc);
            }
        }
    }
    let tors = torsion_at(st, pt)?;
    let mut tg = vec![Mat::zero(4, 4); 4];
    for c in 0..4 {
        for d in 0..4 {
            for f in 0..4 {
                let mut acc = Q::zero();
                for pi in 0..4 {
                    for m in 0..4 {
                        for n in 0..4 {
                            acc += e.at(c, pi).clone()
                                * tors[pi].at(m, n).clone()
                                * einv.at(m, d).clone()
                                * einv.at(n, f).clone();
                        }
                    }
                }
                tg[c].set(d, f, acc);
            }
        }
    }
    let thtr: Vec<Q> =
        (0..4).map(|d| (0..4).fold(Q::zero(), |s, f| s + that[f].at(f, d).clone())).collect();
    let ttr: Vec<Q> =
        (0..4).map(|d| (0..4).fold(Q::zero(), |s, f| s + tg[f].at(f, d).clone())).collect();
    Ok((0..4)
        .map(|c| {
            Mat::from_fn(4, 4, |d, f| {
                let mut lhs = that[c].at(d, f).clone();
                if c == f {
                    lhs += thtr[d].clone();
                }
                if c == d {
                    lhs -= thtr[f].clone();
                }
                let mut rhs = tg[c].at(d, f).clone();
                if c == f {
                    rhs += ttr[d].clone();
                }
                if c == d {
                    rhs -= ttr[f].clone();
                }
                lhs - rhs
            })
        })
        .collect())
}

/// Algebra-valued coframe on a chart of the algebra's dimension: 1-forms
/// varpi^A with polynomial coefficients, pointwise invertible at registered
/// sample points.
#[derive(Clone, Debug)]
pub struct CartanCoframe {
    pub alg: LieAlgebra,
    pub w: Vec<Form<Q>>,
    points: Vec<Vec<Q>>,
}

impl CartanCoframe {
    pub fn new(alg: LieAlgebra, w: Vec<Form<Q>>) -> Self {
        assert_eq!(w.len(), alg.dim);
        assert!(w.iter().all(|f| f.k() == 1 && f.n() == alg.dim));
        CartanCoframe { alg, w, points: Vec::new() }
    }

    /// varpi^A = dy^A.
    pub fn flat(alg: LieAlgebra) -> Self {
        let n = alg.dim;
        let w = (0..n).map(|a| Form::from_indices(n, &[a], Poly::one(n))).collect();
        CartanCoframe::new(alg, w)
    }

    pub fn register_point(&mut self, pt: Vec<Q>) -> Result<(), GeometryError> {
        assert_eq!(pt.len(), self.alg.dim);
        if det(&self.matrix_at(&pt)).is_zero() {
            return Err(GeometryError::SingularCoframe);
        }
        self.points.push(pt);
        Ok(())
    }

    pub fn points(&self) -> &[Vec<Q>] {
        &self.points
    }

    /// W^A_M = coefficient of dy^M in varpi^A, evaluated at pt.
    pub fn matrix_at(&self, pt: &[Q]) -> Mat<Q> {
        let n = self.alg.dim;
        Mat::from_fn(n, n, |a, m| self.w[a].coeff_at(&[m]).eval(pt))
    }
}

/// Right-invariant coframe of a 2-step nilpotent algebra in exponential
/// coordinates: W^A_M = delta^A_M - 1/2 c^A_{BM} y^B. Satisfies the structure
/// equation d varpi + 1/2 [varpi ^ varpi] = 0 exactly (asserted in debug
/// builds); for non-nilpotent algebras the series would not terminate.
pub fn mc_coframe(alg: &LieAlgebra) -> CartanCoframe {
    let n = alg.dim;
    let w: Vec<Form<Q>> = (0..n)
        .map(|a| {
            let mut f = Form::from_indices(n, &[a], Poly::one(n));
            for m in 0..n {
                let mut p = Poly::zero(n);
                for b in 0..n {
                    let c = alg.c(a, b, m);
                    if !c.is_zero() {
                        p = p.add(&Poly::var(n, b).scale_q(&(q(-1, 2) * c.clone())));
                    }
                }
                f = f.add(&Form::from_indices(n, &[m], p));
            }
            f
        })
        .collect();
    let cf = CartanCoframe::new(alg.clone(), w);
    debug_assert!(mc_residual(&cf).iter().all(|f| f.is_zero()), "coframe is not Maurer-Cartan");
    cf
}

/// Structure 2-forms d varpi^A + 1/2 [varpi ^ varpi]^A.
pub fn mc_residual(cf: &CartanCoframe) -> Vec<Form<Q>> {
    let br = wedge_bracket(&cf.w, &cf.w, &cf.alg);
    (0..cf.alg.dim).map(|a| cf.w[a].d().add(&br[a].scale_q(&q(1, 2)))).collect()
}

/// Chart components of the vector-field bracket [hbar, xibar] at pt, where
/// hbar = varpi^{-1}(h). Derivatives of the inverse frame use the pointwise
/// update d(W^{-1}) = -W^{-1} (dW) W^{-1}.
pub fn frame_bracket_at(
    cf: &CartanCoframe,
    h: &[Q],
    xi: &[Q],
    pt: &[Q],
) -> Result<Vec<Q>, GeometryError> {
    let n = cf.alg.dim;
    assert_eq!(h.len(), n);
    assert_eq!(xi.len(), n);
    let wm = cf.matrix_at(pt);
    let winv = inverse(&wm).ok_or(GeometryError::SingularCoframe)?;
    let hbar = winv.mul_vec(h);
    let xibar = winv.mul_vec(xi);
    let mut out = vec![Q::zero(); n];
    for dir in 0..n {
        let dw = Mat::from_fn(n, n, |a, m| cf.w[a].coeff_at(&[m]).partial(dir).eval(pt));
        if dw.is_zero() {
            continue;
        }
        let dinv = winv.mul(&dw).mul(&winv).neg();
        let dxi = dinv.mul_vec(xi);
        let dh = dinv.mul_vec(h);
        for m in 0..n {
            out[m] = out[m].clone() + hbar[dir].clone() * dxi[m].clone()
                - xibar[dir].clone() * dh[m].clone();
        }
    }
    Ok(out)
}

fn two_form_eval(f: &Form<Q>, pt: &[Q], x: &[Q], y: &[Q]) -> Q {
    let mut acc = Q::zero();
    for (idx, p) in f.terms() {
        let (m, n) = (idx[0], idx[1]);
        acc += p.eval(pt) * (x[m].clone() * y[n].clone() - x[n].clone() * y[m].clone());
    }
    acc
}

/// Residual of varpi([hbar, xibar]) - [h, xi] + (d varpi + 1/2 [varpi ^
/// varpi])(hbar, xibar) at pt; identically zero for any pointwise invertible
/// coframe.
pub fn cartan_bracket_identity(
    cf: &CartanCoframe,
    h: &[Q],
    xi: &[Q],
    pt: &[Q],
) -> Result<Vec<Q>, GeometryError> {
    let n = cf.alg.dim;
    let wm = cf.matrix_at(pt);
    let winv = inverse(&wm).ok_or(GeometryError::SingularCoframe)?;
    let vb = frame_bracket_at(cf, h, xi, pt)?;
    let img = wm.mul_vec(&vb);
    let hx = cf.alg.bracket(h, xi);
    let hbar = winv.mul_vec(h);
    let xibar = winv.mul_vec(xi);
    let structure = mc_residual(cf);
    Ok((0..n)
        .map(|a| {
            img[a].clone() - hx[a].clone() + two_form_eval(&structure[a], pt, &hbar, &xibar)
        })
        .collect())
}
