//! Concrete 4x4 complex-rational representations of the Clifford algebras
//! Cl(p,q) for the four 4-dimensional signatures, with the convention
//! gamma_a gamma_b + gamma_b gamma_a = -2 eta_{ab}.
//!
//! The representation is a fixed Dirac-type construction: with Pauli blocks
//! s1, s2, s3, set G1 = s1(x)s1, G2 = s2(x)s1, G3 = s3(x)s1, G4 = 1(x)s3
//! (hermitian, squaring to +1, pairwise anticommuting) and take
//! gamma_a = i G_a when eta_{aa} = +1, gamma_a = G_a when eta_{aa} = -1.
//! All entries lie in {0, +-1, +-i}, so every check is exact.

use crate::algebra::{so_basis, LieAlgebra, Signature, SO_PAIRS};
use crate::linalg::{nullspace, Mat};
use crate::scalar::{cq, cqr, im, Coeff, CQ, Q};
use num::{One, Signed, Zero};

#[derive(Clone, Debug)]
pub struct CliffordRep {
    pub sig: Signature,
    pub so: LieAlgebra,
    pub gamma: Vec<Mat<CQ>>,
    /// spin-basis images sigma_i = 1/4 p_i^{ab} gamma_a gamma_b (= sigma_{ab})
    pub sigma: Vec<Mat<CQ>>,
    /// chirality gamma5 = gamma_1 gamma_2 gamma_3 gamma_4
    pub gamma5: Mat<CQ>,
    /// spinor metric: hermitian, gamma_a^dag beta + beta gamma_a = 0
    pub beta: Mat<CQ>,
}

fn pauli(k: usize) -> Mat<CQ> {
    let mut m = Mat::zero(2, 2);
    match k {
        1 => {
            m.set(0, 1, CQ::one());
            m.set(1, 0, CQ::one());
        }
        2 => {
            m.set(0, 1, -im());
            m.set(1, 0, im());
        }
        3 => {
            m.set(0, 0, CQ::one());
            m.set(1, 1, -CQ::one());
        }
        _ => panic!("pauli index out of range"),
    }
    m
}

fn kron(a: &Mat<CQ>, b: &Mat<CQ>) -> Mat<CQ> {
    Mat::from_fn(a.rows() * b.rows(), a.cols() * b.cols(), |i, j| {
        a.at(i / b.rows(), j / b.cols()).clone() * b.at(i % b.rows(), j % b.cols()).clone()
    })
}

/// the 16 hermitian basis matrices: E_aa, E_ab + E_ba, i(E_ab - E_ba)
fn hermitian_basis() -> Vec<Mat<CQ>> {
    let mut out = Vec::with_capacity(16);
    for a in 0..4 {
        let mut m = Mat::zero(4, 4);
        m.set(a, a, CQ::one());
        out.push(m);
    }
    for a in 0..4 {
        for b in (a + 1)..4 {
            let mut m = Mat::zero(4, 4);
            m.set(a, b, CQ::one());
            m.set(b, a, CQ::one());
            out.push(m);
            let mut m = Mat::zero(4, 4);
            m.set(a, b, im());
            m.set(b, a, -im());
            out.push(m);
        }
    }
    out
}

/// Solve gamma_a^dag beta + beta gamma_a = 0 over the hermitian matrices.
/// The solution space is 1-dimensional real; the representative is scaled so
/// that the first nonzero entry in row-major order has +1 real part (or +1
/// imaginary part when the entry is purely imaginary).
fn spinor_metric(gamma: &[Mat<CQ>]) -> Mat<CQ> {
    let basis = hermitian_basis();
    let mut rows: Vec<Vec<Q>> = Vec::with_capacity(128);
    for g in gamma {
        let conds: Vec<Mat<CQ>> = basis
            .iter()
            .map(|h| g.dagger().mul(h).add(&h.mul(g)))
            .collect();
        for r in 0..4 {
            for c in 0..4 {
                rows.push(conds.iter().map(|m| m.at(r, c).re.clone()).collect());
                rows.push(conds.iter().map(|m| m.at(r, c).im.clone()).collect());
            }
        }
    }
    let ns = nullspace(&Mat::from_rows(rows));
    assert_eq!(ns.len(), 1, "spinor metric space must be 1-dimensional");
    let mut beta = Mat::zero(4, 4);
    for (k, h) in basis.iter().enumerate() {
        beta = beta.add(&h.scale(&cq(ns[0][k].clone(), Q::zero())));
    }
    'scan: for r in 0..4 {
        for c in 0..4 {
            let z = beta.at(r, c).clone();
            if !z.is_zero() {
                let f = if !z.re.is_zero() { z.re } else { z.im };
                beta = beta.scale(&cq(Q::one() / f, Q::zero()));
                break 'scan;
            }
        }
    }
    beta
}

/// Signature (n_plus, n_minus) of a nondegenerate hermitian matrix by exact
/// congruence diagonalization. Zero diagonals are broken by mixing in a
/// partner vector with coefficient 1 or i, whichever produces a nonzero norm.
pub fn hermitian_signature(b: &Mat<CQ>) -> (usize, usize) {
    let n = b.rows();
    let form = |u: &[CQ], v: &[CQ]| -> CQ {
        let bv = b.mul_vec(v);
        let mut acc = CQ::zero();
        for k in 0..n {
            acc = acc + u[k].conj() * bv[k].clone();
        }
        acc
    };
    let mut vecs: Vec<Vec<CQ>> = (0..n)
        .map(|i| {
            let mut v = vec![CQ::zero(); n];
            v[i] = CQ::one();
            v
        })
        .collect();
    let (mut pos, mut neg) = (0usize, 0usize);
    while !vecs.is_empty() {
        if let Some(k) = vecs.iter().position(|v| !form(v, v).is_zero()) {
            let v = vecs.remove(k);
            let d = form(&v, &v);
            assert!(d.im.is_zero(), "hermitian norm must be real");
            if d.re.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            for w in vecs.iter_mut() {
                let c = form(&v, w) / d.clone();
                for (wi, vi) in w.iter_mut().zip(v.iter()) {
                    *wi = wi.clone() - c.clone() * vi.clone();
                }
            }
        } else {
            // every remaining vector is null; find a coupled pair or stop
            let mut found = None;
            'pairs: for i in 0..vecs.len() {
                for j in (i + 1)..vecs.len() {
                    if !form(&vecs[i], &vecs[j]).is_zero() {
                        found = Some((i, j));
                        break 'pairs;
                    }
                }
            }
            let Some((i, j)) = found else { break };
            let z = form(&vecs[i], &vecs[j]);
            let c = if !z.re.is_zero() { CQ::one() } else { im() };
            let vj = vecs[j].clone();
            for (a, bj) in vecs[i].iter_mut().zip(vj.iter()) {
                *a = a.clone() + c.clone() * bj.clone();
            }
        }
    }
    (pos, neg)
}

pub fn build_rep(sig: Signature) -> CliffordRep {
    let so = so_basis(sig);
    let g = [
        kron(&pauli(1), &pauli(1)),
        kron(&pauli(2), &pauli(1)),
        kron(&pauli(3), &pauli(1)),
        kron(&Mat::identity(2), &pauli(3)),
    ];
    let gamma: Vec<Mat<CQ>> = (0..4)
        .map(|a| {
            if sig.eta_i(a) == 1 {
                g[a].scale(&im())
            } else {
                g[a].clone()
            }
        })
        .collect();
    let sigma: Vec<Mat<CQ>> = (0..6)
        .map(|i| {
            let mut acc = Mat::zero(4, 4);
            for a in 0..4 {
                for b in 0..4 {
                    let p = so.p_mult(i).at(a, b);
                    if p.is_zero() {
                        continue;
                    }
                    acc = acc.add(&gamma[a].mul(&gamma[b]).scale(&cq(p / crate::scalar::qi(4), Q::zero())));
                }
            }
            acc
        })
        .collect();
    let gamma5 = gamma[0].mul(&gamma[1]).mul(&gamma[2]).mul(&gamma[3]);
    let beta = spinor_metric(&gamma);
    // construction invariants, cheap enough to keep on
    for a in 0..4 {
        for b in 0..4 {
            let want = if a == b { -2 * sig.eta_i(a) } else { 0 };
            let lhs = gamma[a].anticommutator(&gamma[b]);
            assert_eq!(lhs, Mat::identity(4).scale(&cqr(want, 1)));
        }
    }
    for (i, &(a, b)) in SO_PAIRS.iter().enumerate() {
        let sab = gamma[a].commutator(&gamma[b]).scale(&cqr(1, 2));
        assert_eq!(sigma[i], sab, "sigma_i must equal sigma_ab for its pair");
    }
    CliffordRep { sig, so, gamma, sigma, gamma5, beta }
}

impl CliffordRep {
    /// sigma_{ab} = 1/2 [gamma_a, gamma_b]
    pub fn sigma_ab(&self, a: usize, b: usize) -> Mat<CQ> {
        self.gamma[a].commutator(&self.gamma[b]).scale(&cqr(1, 2))
    }

    /// index raised by eta: gamma^a = eta^{aa} gamma_a
    pub fn gamma_upper(&self, a: usize) -> Mat<CQ> {
        self.gamma[a].scale(&cqr(self.sig.eta_i(a), 1))
    }

    /// the Lie-algebra homomorphism so(p,q) -> End(S): h_i |-> -1/2 sigma_i.
    /// This sign (rather than +1/2) is the one that satisfies both
    /// [rep(x), rep(y)] = rep([x,y]) and [rep(h), gamma_c] = gamma_d rho(h)^d_c
    /// with the structure constants of module `algebra`.
    pub fn spin_rep(&self, i: usize) -> Mat<CQ> {
        self.sigma[i].scale(&cqr(-1, 2))
    }

    /// psibar = psi^dag beta as a row vector
    pub fn cospinor(&self, psi: &[CQ]) -> Vec<CQ> {
        (0..4)
            .map(|c| {
                let mut acc = CQ::zero();
                for r in 0..4 {
                    acc = acc + psi[r].conj() * self.beta.at(r, c).clone();
                }
                acc
            })
            .collect()
    }

    /// psibar_1 M psi_2
    pub fn pair(&self, psi1: &[CQ], m: &Mat<CQ>, psi2: &[CQ]) -> CQ {
        let bar = self.cospinor(psi1);
        let mp = m.mul_vec(psi2);
        let mut acc = CQ::zero();
        for k in 0..4 {
            acc = acc + bar[k].clone() * mp[k].clone();
        }
        acc
    }

    pub fn beta_signature(&self) -> (usize, usize) {
        hermitian_signature(&self.beta)
    }
}

/// axial current A^xi = -1/2 psibar gamma^xi gamma5 psi; real in every
/// signature for the constructed spinor metrics
pub fn axial_current(rep: &CliffordRep, psi: &[CQ]) -> Vec<CQ> {
    (0..4)
        .map(|xi| {
            let m = rep.gamma_upper(xi).mul(&rep.gamma5);
            rep.pair(psi, &m, psi) * cqr(-1, 2)
        })
        .collect()
}

/// residual of the anticommutator table, summed entrywise over all pairs
pub fn anticom_residual(rep: &CliffordRep) -> Q {
    let mut acc = Q::zero();
    for a in 0..4 {
        for b in 0..4 {
            let want = if a == b { -2 * rep.sig.eta_i(a) } else { 0 };
            let r = rep.gamma[a]
                .anticommutator(&rep.gamma[b])
                .sub(&Mat::identity(4).scale(&cqr(want, 1)));
            for i in 0..4 {
                for j in 0..4 {
                    acc += r.at(i, j).abs1();
                }
            }
        }
    }
    acc
}

/// residual of 1/2 {sigma_{mu nu}, gamma_tau} = eps_{mu nu tau ups} gamma^ups gamma5
/// over all 64 triples (the slot order that actually holds; the variant with
/// the summed index leading differs by one odd rotation and fails)
pub fn commchir_residual(rep: &CliffordRep) -> Q {
    let mut acc = Q::zero();
    for mu in 0..4 {
        for nu in 0..4 {
            for tau in 0..4 {
                let lhs = rep
                    .sigma_ab(mu, nu)
                    .anticommutator(&rep.gamma[tau])
                    .scale(&cqr(1, 2));
                let mut rhs = Mat::zero(4, 4);
                for ups in 0..4 {
                    let e = crate::algebra::levi_civita(&[mu, nu, tau, ups]);
                    if e == 0 {
                        continue;
                    }
                    rhs = rhs.add(
                        &rep.gamma[ups]
                            .mul(&rep.gamma5)
                            .scale(&cqr(e * rep.sig.eta_i(ups), 1)),
                    );
                }
                let r = lhs.sub(&rhs);
                for i in 0..4 {
                    for j in 0..4 {
                        acc += r.at(i, j).abs1();
                    }
                }
            }
        }
    }
    acc
}
