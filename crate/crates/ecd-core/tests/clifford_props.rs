// Oracle-backed tests for the Clifford layer. The gamma matrices are
// rebuilt here from explicit Pauli blocks, the spinor metrics are pinned
// as literal matrices, and every identity is checked entrywise over the
// Gaussian rationals.

use ecd_core::algebra::{levi_civita, pair_index, so_basis, Signature, SO_PAIRS};
use ecd_core::clifford::{axial_current, build_rep, hermitian_signature, CliffordRep};
use ecd_core::linalg::Mat;
use ecd_core::scalar::{ci, cq, cqr, im, q, Coeff, CQ};
use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn all_sigs() -> [Signature; 4] {
    [
        Signature::new(4, 0),
        Signature::new(0, 4),
        Signature::new(1, 3),
        Signature::new(3, 1),
    ]
}

// independent reconstruction of the gamma matrices from 2x2 blocks
fn pauli(k: usize) -> Vec<Vec<CQ>> {
    let o = CQ::zero();
    let l = CQ::one();
    match k {
        1 => vec![vec![o.clone(), l.clone()], vec![l, o]],
        2 => vec![vec![o.clone(), -im()], vec![im(), o]],
        3 => vec![vec![l.clone(), o.clone()], vec![o, -l]],
        _ => panic!("pauli index"),
    }
}

fn eye2() -> Vec<Vec<CQ>> {
    vec![
        vec![CQ::one(), CQ::zero()],
        vec![CQ::zero(), CQ::one()],
    ]
}

fn kron(a: &[Vec<CQ>], b: &[Vec<CQ>]) -> Mat<CQ> {
    Mat::from_fn(4, 4, |i, j| {
        a[i / 2][j / 2].clone() * b[i % 2][j % 2].clone()
    })
}

fn gamma_oracle(sig: Signature) -> Vec<Mat<CQ>> {
    let g = [
        kron(&pauli(1), &pauli(1)),
        kron(&pauli(2), &pauli(1)),
        kron(&pauli(3), &pauli(1)),
        kron(&eye2(), &pauli(3)),
    ];
    (0..4)
        .map(|a| {
            if sig.eta_i(a) == 1 {
                g[a].scale(&im())
            } else {
                g[a].clone()
            }
        })
        .collect()
}

fn rand_spinor(rng: &mut ChaCha20Rng) -> Vec<CQ> {
    (0..4)
        .map(|_| {
            cq(
                q(rng.gen_range(-5..6), rng.gen_range(1..4)),
                q(rng.gen_range(-5..6), rng.gen_range(1..4)),
            )
        })
        .collect()
}

#[test]
fn gamma_matches_block_oracle() {
    for sig in all_sigs() {
        let rep = build_rep(sig);
        let want = gamma_oracle(sig);
        for a in 0..4 {
            assert_eq!(rep.gamma[a], want[a], "gamma_{} sig {:?}", a + 1, sig);
        }
    }
}

#[test]
fn anticommutator_table() {
    // gamma_a gamma_b + gamma_b gamma_a = -2 eta_{ab} Id, all pairs, all sigs
    for sig in all_sigs() {
        let rep = build_rep(sig);
        for a in 0..4 {
            for b in 0..4 {
                let lhs = rep.gamma[a].anticommutator(&rep.gamma[b]);
                let want = Mat::<CQ>::identity(4).scale(&ci(-2 * if a == b { sig.eta_i(a) } else { 0 }));
                assert_eq!(lhs, want, "pair ({},{}) sig {:?}", a, b, sig);
            }
        }
        // spec'd spot value: in (1,3) the first gamma squares to -Id
        if sig == Signature::new(1, 3) {
            assert_eq!(
                rep.gamma[0].mul(&rep.gamma[0]),
                Mat::<CQ>::identity(4).scale(&ci(-1))
            );
        }
    }
}

#[test]
fn chirality_element() {
    for sig in all_sigs() {
        let rep = build_rep(sig);
        // gamma5 is the ordered product of the four gammas
        let prod = rep.gamma[0]
            .mul(&rep.gamma[1])
            .mul(&rep.gamma[2])
            .mul(&rep.gamma[3]);
        assert_eq!(rep.gamma5, prod);
        // (gamma5)^2 = (-1)^q
        assert_eq!(
            rep.gamma5.mul(&rep.gamma5),
            Mat::<CQ>::identity(4).scale(&ci(sig.vol_sign()))
        );
        // supercenter: anticommutes with every gamma_a
        for a in 0..4 {
            assert!(rep.gamma5.anticommutator(&rep.gamma[a]).is_zero());
        }
    }
}

#[test]
fn sigma_consistency_and_spin_closure() {
    for sig in all_sigs() {
        let rep = build_rep(sig);
        let so = so_basis(sig);
        for (i, &(a, b)) in SO_PAIRS.iter().enumerate() {
            // sigma_i = 1/4 p_i^{ab} gamma_a gamma_b equals sigma_{ab} = 1/2[gamma_a,gamma_b]
            let sab = rep.gamma[a].commutator(&rep.gamma[b]).scale(&cqr(1, 2));
            assert_eq!(rep.sigma[i], sab, "sigma pair {:?} sig {:?}", (a, b), sig);
        }
        // the spin embedding -1/2 sigma is a Lie algebra homomorphism with the
        // so(p,q) structure constants, and is equivariant through rho
        for i in 0..6 {
            for j in 0..6 {
                let lhs = rep.spin_rep(i).commutator(&rep.spin_rep(j));
                let mut rhs = Mat::zero(4, 4);
                for k in 0..6 {
                    rhs = rhs.add(&rep.spin_rep(k).scale(&CQ::from_q(so.c(k, i, j))));
                }
                assert_eq!(lhs, rhs, "closure ({},{}) sig {:?}", i, j, sig);
            }
            for c in 0..4 {
                let lhs = rep.spin_rep(i).commutator(&rep.gamma[c]);
                let mut rhs = Mat::zero(4, 4);
                for d in 0..4 {
                    rhs = rhs.add(&rep.gamma[d].scale(&CQ::from_q(so.rho[i].at(d, c))));
                }
                assert_eq!(lhs, rhs, "equivariance i={} c={} sig {:?}", i, c, sig);
            }
        }
    }
}

#[test]
fn spinor_metric_defining_property() {
    for sig in all_sigs() {
        let rep = build_rep(sig);
        // hermitian
        assert_eq!(rep.beta, rep.beta.dagger());
        // gamma_a^dag beta + beta gamma_a = 0
        for a in 0..4 {
            let r = rep.gamma[a].dagger().mul(&rep.beta).add(&rep.beta.mul(&rep.gamma[a]));
            assert!(r.is_zero(), "metric compatibility a={} sig {:?}", a, sig);
        }
        // spin acts by infinitesimal beta-isometries: sigma_i^dag beta + beta sigma_i = 0
        for i in 0..6 {
            let r = rep.sigma[i].dagger().mul(&rep.beta).add(&rep.beta.mul(&rep.sigma[i]));
            assert!(r.is_zero(), "spin isometry i={} sig {:?}", i, sig);
        }
    }
}

#[test]
fn spinor_metric_regression_values() {
    // the normalized solutions of the linear system, pinned as literal matrices
    let z = CQ::zero();
    let o = CQ::one();
    let rep40 = build_rep(Signature::new(4, 0));
    assert_eq!(rep40.beta, Mat::identity(4));
    let rep13 = build_rep(Signature::new(1, 3));
    let anti = Mat::from_rows(vec![
        vec![z.clone(), z.clone(), z.clone(), o.clone()],
        vec![z.clone(), z.clone(), o.clone(), z.clone()],
        vec![z.clone(), o.clone(), z.clone(), z.clone()],
        vec![o.clone(), z.clone(), z.clone(), z.clone()],
    ]);
    assert_eq!(rep13.beta, anti);
    let rep31 = build_rep(Signature::new(3, 1));
    let blocks = Mat::from_rows(vec![
        vec![z.clone(), o.clone(), z.clone(), z.clone()],
        vec![o.clone(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), z.clone(), o.clone()],
        vec![z.clone(), z.clone(), o.clone(), z.clone()],
    ]);
    assert_eq!(rep31.beta, blocks);
    let rep04 = build_rep(Signature::new(0, 4));
    let split = Mat::from_rows(vec![
        vec![z.clone(), im(), z.clone(), z.clone()],
        vec![-im(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), z.clone(), im()],
        vec![z.clone(), z.clone(), -im(), z.clone()],
    ]);
    assert_eq!(rep04.beta, split);
}

#[test]
fn spinor_metric_signatures() {
    // definite only in (4,0); all other signatures force the split form
    let expect = [
        (Signature::new(4, 0), (4usize, 0usize)),
        (Signature::new(0, 4), (2, 2)),
        (Signature::new(1, 3), (2, 2)),
        (Signature::new(3, 1), (2, 2)),
    ];
    for (sig, want) in expect {
        let rep = build_rep(sig);
        assert_eq!(hermitian_signature(&rep.beta), want, "sig {:?}", sig);
    }
    // the congruence diagonalizer itself, on matrices with known signature
    let mut h = Mat::<CQ>::zero(3, 3);
    h.set(0, 0, ci(2));
    h.set(1, 1, ci(-3));
    h.set(2, 2, ci(5));
    assert_eq!(hermitian_signature(&h), (2, 1));
    // zero diagonal, off-diagonal hermitian pair: hyperbolic plane = (1,1)
    let mut hyp = Mat::<CQ>::zero(2, 2);
    hyp.set(0, 1, im());
    hyp.set(1, 0, -im());
    assert_eq!(hermitian_signature(&hyp), (1, 1));
}

#[test]
fn sigma_gamma_anticommutator_chirality() {
    // 1/2 {sigma_{mu nu}, gamma_tau} = eps_{mu nu tau ups} gamma^ups gamma5,
    // checked entrywise for all 64 triples in all four signatures
    for sig in all_sigs() {
        let rep = build_rep(sig);
        for mu in 0..4 {
            for nu in 0..4 {
                for tau in 0..4 {
                    let smn = rep.gamma[mu].commutator(&rep.gamma[nu]).scale(&cqr(1, 2));
                    let lhs = smn.anticommutator(&rep.gamma[tau]).scale(&cqr(1, 2));
                    let mut rhs = Mat::zero(4, 4);
                    for ups in 0..4 {
                        let e = levi_civita(&[mu, nu, tau, ups]);
                        if e == 0 {
                            continue;
                        }
                        rhs = rhs.add(
                            &rep.gamma[ups]
                                .mul(&rep.gamma5)
                                .scale(&ci(e * sig.eta_i(ups))),
                        );
                    }
                    assert!(
                        lhs.sub(&rhs).is_zero(),
                        "triple ({},{},{}) sig {:?}",
                        mu,
                        nu,
                        tau,
                        sig
                    );
                }
            }
        }
    }
}

#[test]
fn gamma_bracket_total_antisymmetry() {
    // {[gamma_mu, gamma_nu], gamma_tau} flips sign under (mu nu), (mu tau), (nu tau),
    // and satisfies the derivation identity
    // {[g_mu,g_nu],g_tau} = [g_mu,{g_nu,g_tau}] - {g_nu,[g_mu,g_tau]} = {g_nu,[g_tau,g_mu]}
    for sig in all_sigs() {
        let rep = build_rep(sig);
        let m = |mu: usize, nu: usize, tau: usize| {
            rep.gamma[mu]
                .commutator(&rep.gamma[nu])
                .anticommutator(&rep.gamma[tau])
        };
        for mu in 0..4 {
            for nu in 0..4 {
                for tau in 0..4 {
                    let base = m(mu, nu, tau);
                    assert_eq!(base, m(nu, mu, tau).neg());
                    assert_eq!(base, m(tau, nu, mu).neg());
                    assert_eq!(base, m(mu, tau, nu).neg());
                    let jacobi_like = rep.gamma[mu]
                        .commutator(&rep.gamma[nu].anticommutator(&rep.gamma[tau]))
                        .sub(&rep.gamma[nu].anticommutator(&rep.gamma[mu].commutator(&rep.gamma[tau])));
                    assert_eq!(base, jacobi_like);
                    assert_eq!(
                        base,
                        rep.gamma[nu].anticommutator(&rep.gamma[tau].commutator(&rep.gamma[mu]))
                    );
                }
            }
        }
    }
}

// direct componentwise oracle for psibar M psi, no library pairing helpers
fn sandwich_oracle(rep: &CliffordRep, psi: &[CQ], m: &Mat<CQ>) -> CQ {
    let mut acc = CQ::zero();
    for r in 0..4 {
        for s in 0..4 {
            for t in 0..4 {
                acc = acc
                    + psi[r].conj() * rep.beta.at(r, s).clone() * m.at(s, t).clone()
                        * psi[t].clone();
            }
        }
    }
    acc
}

#[test]
fn axial_current_properties() {
    let mut rng = ChaCha20Rng::seed_from_u64(905);
    for sig in all_sigs() {
        let rep = build_rep(sig);
        // zero spinor
        let zero = vec![CQ::zero(); 4];
        assert!(axial_current(&rep, &zero).iter().all(|c| c.is_zero()));
        for _ in 0..12 {
            let psi = rand_spinor(&mut rng);
            let a = axial_current(&rep, &psi);
            // realness of each component, and of psibar psi
            for (xi, c) in a.iter().enumerate() {
                assert!(c.im.is_zero(), "A^{} not real, sig {:?}", xi, sig);
            }
            let norm = sandwich_oracle(&rep, &psi, &Mat::identity(4));
            assert!(norm.im.is_zero(), "psibar psi not real, sig {:?}", sig);
            // componentwise matrix oracle: A^xi = -1/2 psibar gamma^xi gamma5 psi
            for xi in 0..4 {
                let m = rep.gamma[xi].mul(&rep.gamma5).scale(&ci(sig.eta_i(xi)));
                let want = sandwich_oracle(&rep, &psi, &m) * cqr(-1, 2);
                assert_eq!(a[xi], want);
            }
            // quadratic scaling: A(2 psi) = 4 A(psi)
            let psi2: Vec<CQ> = psi.iter().map(|c| c.clone() * ci(2)).collect();
            let a2 = axial_current(&rep, &psi2);
            for xi in 0..4 {
                assert_eq!(a2[xi], a[xi].clone() * ci(4));
            }
        }
    }
    // fixed value on the first basis spinor, deterministic per construction
    let rep = build_rep(Signature::new(4, 0));
    let e1 = vec![CQ::one(), CQ::zero(), CQ::zero(), CQ::zero()];
    let a = axial_current(&rep, &e1);
    for xi in 0..4 {
        let m = rep.gamma[xi].mul(&rep.gamma5);
        let want = sandwich_oracle(&rep, &e1, &m) * cqr(-1, 2);
        assert_eq!(a[xi], want);
    }
    // with this construction the value is concentrated in the third slot:
    // gamma^3 gamma5 = -sigma3 (x) sigma3 whose (1,1) entry is -1
    for xi in 0..4 {
        if xi == 2 {
            assert_eq!(a[xi], cqr(1, 2));
        } else {
            assert!(a[xi].is_zero());
        }
    }
}

#[test]
fn cospinor_pairing_helpers() {
    let mut rng = ChaCha20Rng::seed_from_u64(906);
    for sig in all_sigs() {
        let rep = build_rep(sig);
        let psi1 = rand_spinor(&mut rng);
        let psi2 = rand_spinor(&mut rng);
        // pair(psi1, M, psi2) agrees with the componentwise oracle
        let m = rep.gamma[1].mul(&rep.gamma[2]);
        let via_lib = rep.pair(&psi1, &m, &psi2);
        let mut want = CQ::zero();
        let bar1 = rep.cospinor(&psi1);
        let mpsi2 = m.mul_vec(&psi2);
        for k in 0..4 {
            want = want + bar1[k].clone() * mpsi2[k].clone();
        }
        assert_eq!(via_lib, want);
        // sesquilinearity in the first argument
        let lam = cq(q(2, 3), q(-1, 2));
        let scaled: Vec<CQ> = psi1.iter().map(|c| c.clone() * lam.clone()).collect();
        assert_eq!(rep.pair(&scaled, &m, &psi2), lam.conj() * rep.pair(&psi1, &m, &psi2));
    }
}

#[test]
fn gamma_upper_raises_with_eta() {
    for sig in all_sigs() {
        let rep = build_rep(sig);
        for a in 0..4 {
            assert_eq!(rep.gamma_upper(a), rep.gamma[a].scale(&ci(sig.eta_i(a))));
        }
        // pairwise independence spot check: pair index mapping is coherent
        assert_eq!(pair_index(0, 1), 0);
    }
}
