//! Lie-algebra data for so(p,q) and its semidirect extensions by R^4,
//! the representation rho, the multiplier constants p_i^{bc}, the
//! Levi-Civita symbol and the antisymmetrized Kronecker symbol.
//!
//! Structure constants are never entered by hand: they are computed from
//! matrix commutators of the defining representation
//! rho(h_{ab})^c_d = delta^c_a eta_{bd} - delta^c_b eta_{ad},
//! with the so(p,q) basis indexed by ordered pairs a<b.

use crate::exterior::Form;
use crate::linalg::Mat;
use crate::scalar::{qi, Coeff, Q};
use num::{Signed, Zero};

/// ordered-pair basis of so(p,q), 0-based
pub const SO_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// position of (a,b), a<b, in the pair basis
pub fn pair_index(a: usize, b: usize) -> usize {
    SO_PAIRS
        .iter()
        .position(|&p| p == (a, b))
        .expect("pair_index wants a<b in 0..4")
}

/// diagonal metric with p entries +1 then q entries -1
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Signature {
    pub p: usize,
    pub q: usize,
}

impl Signature {
    pub fn new(p: usize, q: usize) -> Signature {
        assert_eq!(p + q, 4, "only 4-dimensional signatures are supported");
        Signature { p, q }
    }

    pub fn eta_i(&self, a: usize) -> i64 {
        assert!(a < 4);
        if a < self.p {
            1
        } else {
            -1
        }
    }

    pub fn eta(&self, a: usize) -> Q {
        qi(self.eta_i(a))
    }

    /// (-1)^q, the squared norm sign of the volume element
    pub fn vol_sign(&self) -> i64 {
        if self.q % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn label(&self) -> String {
        format!("({},{})", self.p, self.q)
    }
}

/// Finite-dimensional Lie algebra with an ordered basis and exact rational
/// structure constants c^A_{BC}. For the orthogonal and semidirect cases the
/// defining rho matrices and the raised multiplier constants are kept along.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    pub name: String,
    pub dim: usize,
    pub sig: Option<Signature>,
    pub labels: Vec<String>,
    /// generators 0..rot_dim are the so(p,q) block (0 when not applicable)
    pub rot_dim: usize,
    /// rho(h_i) as 4x4 matrices, one per pair, when the algebra carries them
    pub rho: Vec<Mat<Q>>,
    c: Vec<Q>,
    p_mats: Vec<Mat<Q>>,
}

impl LieAlgebra {
    fn empty(name: String, dim: usize, labels: Vec<String>) -> LieAlgebra {
        LieAlgebra {
            name,
            dim,
            sig: None,
            labels,
            rot_dim: 0,
            rho: Vec::new(),
            c: vec![Q::zero(); dim * dim * dim],
            p_mats: Vec::new(),
        }
    }

    pub fn c(&self, a: usize, b: usize, cc: usize) -> &Q {
        &self.c[(a * self.dim + b) * self.dim + cc]
    }

    fn set_c(&mut self, a: usize, b: usize, cc: usize, v: Q) {
        self.c[(a * self.dim + b) * self.dim + cc] = v;
    }

    /// [u,v]^A = c^A_{BC} u^B v^C
    pub fn bracket(&self, u: &[Q], v: &[Q]) -> Vec<Q> {
        assert_eq!(u.len(), self.dim);
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|a| {
                let mut acc = Q::zero();
                for b in 0..self.dim {
                    if u[b].is_zero() {
                        continue;
                    }
                    for cc in 0..self.dim {
                        acc += self.c(a, b, cc).clone() * u[b].clone() * v[cc].clone();
                    }
                }
                acc
            })
            .collect()
    }

    /// sum of |c^A_{BC} + c^A_{CB}|
    pub fn antisym_residual(&self) -> Q {
        let mut acc = Q::zero();
        for a in 0..self.dim {
            for b in 0..self.dim {
                for cc in 0..self.dim {
                    acc += (self.c(a, b, cc).clone() + self.c(a, cc, b).clone()).abs();
                }
            }
        }
        acc
    }

    /// sum over basis triples of |[[x_B,x_C],x_D] + cyclic| components
    pub fn jacobi_residual(&self) -> Q {
        let mut acc = Q::zero();
        for b in 0..self.dim {
            for cc in 0..self.dim {
                for d in 0..self.dim {
                    for a in 0..self.dim {
                        let mut r = Q::zero();
                        for e in 0..self.dim {
                            r += self.c(e, b, cc).clone() * self.c(a, e, d).clone()
                                + self.c(e, cc, d).clone() * self.c(a, e, b).clone()
                                + self.c(e, d, b).clone() * self.c(a, e, cc).clone();
                        }
                        acc += r.abs();
                    }
                }
            }
        }
        acc
    }

    /// sum over A of |c^B_{AB} summed over B|
    pub fn unimod_residual(&self) -> Q {
        let mut acc = Q::zero();
        for a in 0..self.dim {
            let mut r = Q::zero();
            for b in 0..self.dim {
                r += self.c(b, a, b).clone();
            }
            acc += r.abs();
        }
        acc
    }

    /// raised multiplier constants p_i^{bc} = 2 rho^b_{i,d} eta^{dc}
    pub fn p_mult(&self, i: usize) -> &Mat<Q> {
        &self.p_mats[i]
    }
}

/// rho(h_{ab}) for one ordered pair
pub fn rho_matrix(sig: Signature, pair: (usize, usize)) -> Mat<Q> {
    let (a, b) = pair;
    Mat::from_fn(4, 4, |c, d| {
        let mut v = 0;
        if c == a && b == d {
            v += sig.eta_i(b);
        }
        if c == b && a == d {
            v -= sig.eta_i(a);
        }
        qi(v)
    })
}

/// coefficients of M over the pair basis: m^{ab} = (M diag(eta))[a][b]
fn expand_so(sig: Signature, m: &Mat<Q>) -> Vec<Q> {
    SO_PAIRS
        .iter()
        .map(|&(a, b)| m.at(a, b).clone() * sig.eta(b))
        .collect()
}

/// Expand an so(p,q) matrix (eta-antisymmetric) over the pair basis.
/// Panics if the pair basis does not reconstruct the input.
pub fn so_expand(sig: Signature, m: &Mat<Q>) -> Vec<Q> {
    let coef = expand_so(sig, m);
    let mut rec = Mat::zero(4, 4);
    for (k, ck) in coef.iter().enumerate() {
        rec = rec.add(&rho_matrix(sig, SO_PAIRS[k]).scale(ck));
    }
    assert_eq!(&rec, m, "matrix is not eta-antisymmetric");
    coef
}

/// so(p,q) with the pair basis; constants from matrix commutators
pub fn so_basis(sig: Signature) -> LieAlgebra {
    let labels = SO_PAIRS
        .iter()
        .map(|&(a, b)| format!("h{}{}", a + 1, b + 1))
        .collect();
    let mut l = LieAlgebra::empty(format!("so{}", sig.label()), 6, labels);
    l.sig = Some(sig);
    l.rot_dim = 6;
    l.rho = SO_PAIRS.iter().map(|&p| rho_matrix(sig, p)).collect();
    for i in 0..6 {
        for j in 0..6 {
            let comm = l.rho[i].commutator(&l.rho[j]);
            let coef = expand_so(sig, &comm);
            // the pair basis must reconstruct the commutator exactly
            let mut rec = Mat::zero(4, 4);
            for (k, ck) in coef.iter().enumerate() {
                rec = rec.add(&l.rho[k].scale(ck));
            }
            assert_eq!(rec, comm, "so(p,q) expansion failed; rho is not closed");
            for (k, ck) in coef.into_iter().enumerate() {
                l.set_c(k, i, j, ck);
            }
        }
    }
    l.p_mats = (0..6)
        .map(|i| Mat::from_fn(4, 4, |b, c| qi(2) * l.rho[i].at(b, c).clone() * sig.eta(c)))
        .collect();
    l
}

/// so(p,q) |x R^4 with rotations first (0..6) then translations (6..10)
pub fn semidirect(so: &LieAlgebra) -> LieAlgebra {
    assert_eq!(so.rot_dim, 6, "semidirect wants an so(p,q) input");
    let sig = so.sig.expect("so algebra carries its signature");
    let mut labels = so.labels.clone();
    labels.extend((0..4).map(|a| format!("e{}", a + 1)));
    let mut l = LieAlgebra::empty(format!("iso{}", sig.label()), 10, labels);
    l.sig = Some(sig);
    l.rot_dim = 6;
    l.rho = so.rho.clone();
    l.p_mats = so.p_mats.clone();
    for i in 0..6 {
        for j in 0..6 {
            for k in 0..6 {
                l.set_c(k, i, j, so.c(k, i, j).clone());
            }
        }
        // [h_i, e_c] = rho_i e_c
        for c in 0..4 {
            for a in 0..4 {
                let v = so.rho[i].at(a, c).clone();
                l.set_c(6 + a, i, 6 + c, v.clone());
                l.set_c(6 + a, 6 + c, i, -v);
            }
        }
    }
    debug_assert!(l.unimod_residual().is_zero());
    l
}

/// abelian algebra of the given dimension
pub fn abelian(dim: usize) -> LieAlgebra {
    let labels = (0..dim).map(|a| format!("t{}", a + 1)).collect();
    LieAlgebra::empty(format!("abelian({})", dim), dim, labels)
}

/// free 2-step nilpotent algebra on k generators:
/// [x_a, x_b] = z_{ab} for a<b, center spanned by the z
pub fn nilpotent2_free(k: usize) -> LieAlgebra {
    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|a| ((a + 1)..k).map(move |b| (a, b)))
        .collect();
    let mut labels: Vec<String> = (0..k).map(|a| format!("x{}", a + 1)).collect();
    labels.extend(pairs.iter().map(|&(a, b)| format!("z{}{}", a + 1, b + 1)));
    let dim = k + pairs.len();
    let mut l = LieAlgebra::empty(format!("nil2({})", k), dim, labels);
    for (idx, &(a, b)) in pairs.iter().enumerate() {
        l.set_c(k + idx, a, b, qi(1));
        l.set_c(k + idx, b, a, qi(-1));
    }
    l
}

/// sum of |rho^b_{i,d} eta^{dc} + rho^c_{i,d} eta^{db}| over all i,b,c
pub fn rho_antisym_residual(sig: Signature) -> Q {
    let mut acc = Q::zero();
    for &pair in SO_PAIRS.iter() {
        let r = rho_matrix(sig, pair);
        for b in 0..4 {
            for c in 0..4 {
                let raised_bc = r.at(b, c).clone() * sig.eta(c);
                let raised_cb = r.at(c, b).clone() * sig.eta(b);
                acc += (raised_bc + raised_cb).abs();
            }
        }
    }
    acc
}

/// p_i^{bc} A_{bc}
pub fn p_contract(p_i: &Mat<Q>, a: &Mat<Q>) -> Q {
    let mut acc = Q::zero();
    for b in 0..4 {
        for c in 0..4 {
            acc += p_i.at(b, c).clone() * a.at(b, c).clone();
        }
    }
    acc
}

/// rank-4 Levi-Civita symbol, eps_{0123} = +1; zero on repeated indices
pub fn levi_civita(idx: &[usize]) -> i64 {
    assert_eq!(idx.len(), 4);
    let mut sign = 1i64;
    for i in 0..4 {
        for j in (i + 1)..4 {
            if idx[i] == idx[j] {
                return 0;
            }
            if idx[i] > idx[j] {
                sign = -sign;
            }
        }
    }
    if idx.iter().any(|&x| x > 3) {
        return 0;
    }
    sign
}

/// residual of 1/2 eps_{xi nu tau chi} eps^{ups tau chi mu}
///   - (-1)^q (delta^ups_xi delta^mu_nu - delta^mu_xi delta^ups_nu)
/// summed over all 256 free-index assignments
pub fn lc_contraction_residual(sig: Signature) -> Q {
    let mut acc = Q::zero();
    let delta = |x: usize, y: usize| if x == y { 1i64 } else { 0 };
    for xi in 0..4 {
        for nu in 0..4 {
            for ups in 0..4 {
                for mu in 0..4 {
                    let mut lhs2 = 0i64;
                    for tau in 0..4 {
                        for chi in 0..4 {
                            let lower = levi_civita(&[xi, nu, tau, chi]);
                            if lower == 0 {
                                continue;
                            }
                            let raised = levi_civita(&[ups, tau, chi, mu])
                                * sig.eta_i(ups)
                                * sig.eta_i(tau)
                                * sig.eta_i(chi)
                                * sig.eta_i(mu);
                            lhs2 += lower * raised;
                        }
                    }
                    let rhs2 =
                        2 * sig.vol_sign() * (delta(ups, xi) * delta(mu, nu) - delta(mu, xi) * delta(ups, nu));
                    acc += qi((lhs2 - rhs2).abs());
                }
            }
        }
    }
    acc
}

/// non-normalised antisymmetric Kronecker symbol delta^{[efg]}_{bcd}:
/// d^e_b (d^f_c d^g_d - d^f_d d^g_c)
///   + d^e_c (d^f_d d^g_b - d^f_b d^g_d)
///   + d^e_d (d^f_b d^g_c - d^f_c d^g_b)
pub fn antisym_kronecker(upper: [usize; 3], lower: [usize; 3]) -> Q {
    let d = |x: usize, y: usize| if x == y { 1i64 } else { 0 };
    let [e, f, g] = upper;
    let [b, c, dd] = lower;
    qi(d(e, b) * (d(f, c) * d(g, dd) - d(f, dd) * d(g, c))
        + d(e, c) * (d(f, dd) * d(g, b) - d(f, b) * d(g, dd))
        + d(e, dd) * (d(f, b) * d(g, c) - d(f, c) * d(g, b)))
}

/// componentwise wedge bracket [alpha^beta]^A = c^A_{BC} alpha^B ^ beta^C
/// (unhalved; factors of 1/2 stay visible at call sites)
pub fn wedge_bracket<C: Coeff>(alpha: &[Form<C>], beta: &[Form<C>], l: &LieAlgebra) -> Vec<Form<C>> {
    assert_eq!(alpha.len(), l.dim, "alpha is not valued in the algebra");
    assert_eq!(beta.len(), l.dim, "beta is not valued in the algebra");
    let n = alpha[0].n();
    let k = alpha[0].k() + beta[0].k();
    (0..l.dim)
        .map(|a| {
            let mut acc = Form::zero(n, k);
            for b in 0..l.dim {
                if alpha[b].is_zero() {
                    continue;
                }
                for cc in 0..l.dim {
                    let c = l.c(a, b, cc);
                    if c.is_zero() || beta[cc].is_zero() {
                        continue;
                    }
                    acc = acc.add(&alpha[b].wedge(&beta[cc]).scale_q(c));
                }
            }
            acc
        })
        .collect()
}
