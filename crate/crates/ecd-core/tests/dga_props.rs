//! Free-DGA checks: normal form, dual forms against an independent
//! contraction oracle, differential rules pinned by d^2 = 0 and graded
//! Leibniz, the universal identities, and the Euler-Lagrange shapes cut out
//! of the constrained Poincare-Cartan forms.

use ecd_core::algebra::{self, Signature};
use ecd_core::clifford::build_rep;
use ecd_core::dga::{
    multiplier_exactness, nonbc_pairs, Contraction, Dga, DgaError, EcdDga, Element, GenId,
};
use ecd_core::scalar::{cqr, q, CQ};
use num::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

// independent oracles, written before anything they check

/// interior product against a single generator slot, straight from the
/// graded Leibniz picture: drop each occurrence of `target` with the sign
/// (-1)^{number of odd factors to its left}
fn contract_slot(dga: &Dga, e: &Element, target: GenId) -> Element {
    let mut out = Element::zero();
    for (m, c) in e.terms() {
        let mut neg = false;
        for (pos, &g) in m.iter().enumerate() {
            if g == target {
                let mut rest = m.clone();
                rest.remove(pos);
                let cc = if neg { -c.clone() } else { c.clone() };
                out = out.add(&dga.monomial(&rest, cc));
            }
            if dga.generator(g).degree % 2 == 1 {
                neg = !neg;
            }
        }
    }
    out
}

/// dual-form oracle: contract the listed slots into the volume monomial one
/// at a time, first index first
fn dual_oracle(ctx: &EcdDga, idx: &[usize]) -> Element {
    let vol: Vec<GenId> = (0..ctx.alg.dim).map(|a| ctx.lam_gen(a)).collect();
    let mut e = ctx.dga.monomial(&vol, CQ::one());
    for &a in idx {
        e = contract_slot(&ctx.dga, &e, ctx.lam_gen(a));
    }
    e
}

fn euclid() -> EcdDga {
    let sig = Signature::new(4, 0);
    EcdDga::new(algebra::semidirect(&algebra::so_basis(sig)), Some(build_rep(sig)))
}

fn minkowski() -> EcdDga {
    let sig = Signature::new(1, 3);
    EcdDga::new(algebra::semidirect(&algebra::so_basis(sig)), Some(build_rep(sig)))
}

fn toy() -> EcdDga {
    EcdDga::new(algebra::abelian(10), None)
}

fn random_element(ctx: &EcdDga, rng: &mut ChaCha20Rng, terms: usize, len: usize) -> Element {
    let n = ctx.dga.gen_count() as u32;
    let mut e = Element::zero();
    for _ in 0..rng.gen_range(1..=terms) {
        let k = rng.gen_range(1..=len);
        let gens: Vec<GenId> = (0..k).map(|_| rng.gen_range(0..n)).collect();
        e = e.add(&ctx.dga.monomial(&gens, cqr(rng.gen_range(-9..=9), rng.gen_range(1..=9))));
    }
    e
}

fn random_monomial(ctx: &EcdDga, rng: &mut ChaCha20Rng, len: usize) -> (Vec<GenId>, Element) {
    let n = ctx.dga.gen_count() as u32;
    let k = rng.gen_range(1..=len);
    let gens: Vec<GenId> = (0..k).map(|_| rng.gen_range(0..n)).collect();
    let e = ctx.dga.monomial(&gens, CQ::one());
    (gens, e)
}

fn gen_elem(ctx: &EcdDga, g: GenId) -> Element {
    ctx.dga.monomial(&[g], CQ::one())
}

#[test]
fn normal_form_examples() {
    let mut dga = Dga::new();
    let x = dga.declare("x", 1);
    let y = dga.declare("y", 1);
    let p = dga.declare("p", 0);
    let l1 = dga.declare("L1", 2);
    let l2 = dga.declare("L2", 2);
    let one = CQ::one();
    assert!(dga.monomial(&[x, y], one.clone()).add(&dga.monomial(&[y, x], one.clone())).is_zero());
    assert!(dga.monomial(&[l1, l2], one.clone()).sub(&dga.monomial(&[l2, l1], one.clone())).is_zero());
    assert!(dga.monomial(&[p, x], one.clone()).sub(&dga.monomial(&[x, p], one.clone())).is_zero());
    assert!(dga.monomial(&[x, x], one.clone()).is_zero());
    assert!(!dga.monomial(&[p, p], one.clone()).is_zero());
    let m = dga.monomial(&[l1, p, y, x], one);
    assert_eq!(m.term_count(), 1);
    assert_eq!(dga.normalize(&m), m);
    assert_eq!(dga.monomial_degree(&[x, p, l2]), 3);
}

#[test]
fn dual_forms_match_contraction_oracle() {
    let ctx = toy();
    let n = ctx.alg.dim;
    let vol_gens: Vec<GenId> = (0..n).map(|a| ctx.lam_gen(a)).collect();
    assert_eq!(ctx.dual_lambda(&[]).unwrap(), ctx.dga.monomial(&vol_gens, CQ::one()));
    let l9_gens: Vec<GenId> = (1..n).map(|a| ctx.lam_gen(a)).collect();
    assert_eq!(ctx.dual_lambda(&[0]).unwrap(), ctx.dga.monomial(&l9_gens, CQ::one()));

    for a in 0..n {
        assert_eq!(ctx.dual_lambda(&[a]).unwrap(), dual_oracle(&ctx, &[a]));
        for b in 0..n {
            if a != b {
                assert_eq!(ctx.dual_lambda(&[a, b]).unwrap(), dual_oracle(&ctx, &[a, b]));
            }
        }
    }
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    for _ in 0..50 {
        let k = rng.gen_range(3..=6);
        let mut idx: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = rng.gen_range(i..n);
            idx.swap(i, j);
        }
        idx.truncate(k);
        assert_eq!(ctx.dual_lambda(&idx).unwrap(), dual_oracle(&ctx, &idx), "indices {:?}", idx);
    }

    // the defining pairing lam^A ^ lam^{(9)}_B = delta^A_B lam^{(10)}
    let vol = ctx.dual_lambda(&[]).unwrap();
    for a in 0..n {
        for b in 0..n {
            let got = ctx.dga.mul(&gen_elem(&ctx, ctx.lam_gen(a)), &ctx.dual_lambda(&[b]).unwrap());
            if a == b {
                assert_eq!(got, vol);
            } else {
                assert!(got.is_zero());
            }
        }
    }

    assert_eq!(ctx.dual_lambda(&[2, 2]), Err(DgaError::RepeatedIndex(2)));
    assert_eq!(ctx.dual_lambda(&[1, 3, 1]), Err(DgaError::RepeatedIndex(1)));
}

#[test]
fn differential_rules_pinned() {
    for ctx in [euclid(), minkowski()] {
        let n = ctx.alg.dim;
        for a in 0..n {
            let la = gen_elem(&ctx, ctx.lam_gen(a));
            assert!(ctx.dga.d(&ctx.dga.d(&la)).is_zero(), "d^2 on coframe index {}", a);
            // the curvature rule agrees with the wedge bracket [cap ^ lam]^A
            // built directly from the structure constants
            let mut bracket = Element::zero();
            for b in 0..n {
                for c in 0..n {
                    let cv = ctx.alg.c(a, b, c);
                    if !cv.is_zero() {
                        let m = ctx.dga.monomial(&[ctx.cap_gen(b), ctx.lam_gen(c)], CQ::one());
                        bracket = bracket.add(&m.scale_q(cv));
                    }
                }
            }
            let da = ctx.dga.d(&gen_elem(&ctx, ctx.cap_gen(a)));
            assert_eq!(da, bracket, "curvature rule for index {}", a);
        }
    }
}

#[test]
fn d_squared_vanishes_on_random_elements() {
    let mut rng = ChaCha20Rng::seed_from_u64(23);
    for (k, ctx) in [toy(), euclid(), minkowski()].iter().enumerate() {
        let trials = if k == 0 { 34 } else { 33 };
        for _ in 0..trials {
            let e = random_element(ctx, &mut rng, 4, 5);
            assert!(ctx.dga.d(&ctx.dga.d(&e)).is_zero());
        }
    }
}

#[test]
fn graded_leibniz_on_random_products() {
    let mut rng = ChaCha20Rng::seed_from_u64(37);
    let ctx = euclid();
    for _ in 0..50 {
        let (gens, a) = random_monomial(&ctx, &mut rng, 4);
        let deg = ctx.dga.monomial_degree(&gens);
        let b = random_element(&ctx, &mut rng, 3, 4);
        let lhs = ctx.dga.d(&ctx.dga.mul(&a, &b));
        let mut rhs = ctx.dga.mul(&ctx.dga.d(&a), &b);
        let adb = ctx.dga.mul(&a, &ctx.dga.d(&b));
        rhs = if deg % 2 == 1 { rhs.sub(&adb) } else { rhs.add(&adb) };
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn contraction_is_a_graded_derivation() {
    let mut rng = ChaCha20Rng::seed_from_u64(41);
    let ctx = euclid();
    let x = ctx.coframe_contraction();
    for _ in 0..50 {
        let (gens, a) = random_monomial(&ctx, &mut rng, 4);
        let deg = ctx.dga.monomial_degree(&gens);
        let b = random_element(&ctx, &mut rng, 3, 4);
        let lhs = ctx.dga.contract(&x, &ctx.dga.mul(&a, &b));
        let mut rhs = ctx.dga.mul(&ctx.dga.contract(&x, &a), &b);
        let part = ctx.dga.mul(&a, &ctx.dga.contract(&x, &b));
        rhs = if deg % 2 == 1 { rhs.sub(&part) } else { rhs.add(&part) };
        assert_eq!(lhs, rhs);
    }
    // iota of iota vanishes for the coframe images and for delta-selections
    let m = ctx.multiplier_contraction(2, 0, 6);
    for _ in 0..20 {
        let e = random_element(&ctx, &mut rng, 3, 5);
        assert!(ctx.dga.contract(&x, &ctx.dga.contract(&x, &e)).is_zero());
        assert!(ctx.dga.contract(&m, &ctx.dga.contract(&m, &e)).is_zero());
    }
}

#[test]
fn universal_identities_hold() {
    for ctx in [toy(), euclid(), minkowski()] {
        let rep = ctx.verify_universal();
        assert_eq!(rep.rows.len(), 6);
        for row in &rep.rows {
            assert_eq!(row.residual_terms, 0, "{} on {}", row.id, rep.algebra);
        }
    }
}

#[test]
fn multiplier_inventory_and_variation() {
    let ctx = euclid();
    let pairs = nonbc_pairs(&ctx.alg);
    assert_eq!(pairs.len(), 78);
    assert!(pairs.iter().all(|&(b, c)| b != c && !(b >= 6 && c >= 6)));
    assert!(ctx.p_gen(3, 0, 6).is_some());
    assert!(ctx.p_gen(3, 6, 0).is_some());
    assert!(ctx.p_gen(3, 6, 7).is_none());
    assert!(ctx.p_gen(3, 1, 1).is_none());
    assert_eq!(nonbc_pairs(&toy().alg).len(), 90);
    assert_eq!(ctx.dga.gen_count(), 30 + 2 * 78 * 10 + 16 + 96);
    assert_eq!(toy().dga.gen_count(), 30 + 2 * 90 * 10 + 16);

    for ctx in [toy(), euclid(), minkowski()] {
        let rep = ctx.verify_el_multiplier();
        assert!(rep.all_zero(), "multiplier variation on {}", rep.algebra);
    }

    // one variation written out against the unbatched contraction
    let dtheta = ctx.dga.d(&ctx.theta_ec());
    let got = ctx.dga.contract(&ctx.multiplier_contraction(0, 0, 6), &dtheta);
    let head = ctx.dga.monomial(&[ctx.cap_gen(0)], cqr(1, 2));
    let want = ctx.dga.mul(&head, &ctx.dual_lambda(&[0, 6]).unwrap());
    assert_eq!(got, want);
}

#[test]
fn coframe_variation_matches_el_shape() {
    for ctx in [toy(), euclid(), minkowski()] {
        let rep = ctx.verify_el_coframe();
        assert_eq!(rep.rows.len(), 2);
        for row in &rep.rows {
            assert_eq!(row.residual_terms, 0, "{} on {}", row.id, rep.algebra);
        }
    }
}

#[test]
fn mass_variation_against_hand_expansion() {
    let ctx = euclid();
    let d = &ctx.dga;
    let m = q(3, 2);
    let n = ctx.alg.dim;
    let vol = ctx.dual_lambda(&[]).unwrap();
    let mut pair = Element::zero();
    let mut dpair = Element::zero();
    for al in 0..4 {
        pair = pair.add(&d.mul(&gen_elem(&ctx, ctx.sbar_gen(al)), &gen_elem(&ctx, ctx.s_gen(al))));
        dpair = dpair.add(&d.mul(&gen_elem(&ctx, ctx.dsbar_gen(al)), &gen_elem(&ctx, ctx.s_gen(al))));
        dpair = dpair.add(&d.mul(&gen_elem(&ctx, ctx.sbar_gen(al)), &gen_elem(&ctx, ctx.ds_gen(al))));
    }
    // d(vol) by hand: the quadratic parts of the coframe rule die against
    // the complete coframe monomial, leaving one curvature replacement per
    // slot with alternating sign
    let mut dvol = Element::zero();
    for a in 0..n {
        let gens: Vec<GenId> =
            (0..n).map(|b| if b == a { ctx.cap_gen(b) } else { ctx.lam_gen(b) }).collect();
        let sign = if a % 2 == 0 { 1 } else { -1 };
        dvol = dvol.add(&d.monomial(&gens, cqr(sign, 1)));
    }
    assert_eq!(d.d(&vol), dvol);
    let mass_term = d.mul(&pair, &vol).scale_q(&m).neg();
    let hand = d.mul(&dpair, &vol).add(&d.mul(&pair, &dvol)).scale_q(&m).neg();
    assert_eq!(d.d(&mass_term), hand);
    for al in 0..4 {
        let got = d.contract(&ctx.sbar_contraction(al), &d.d(&mass_term));
        let want = d.mul(&gen_elem(&ctx, ctx.s_gen(al)), &vol).scale_q(&m).neg();
        assert_eq!(got, want, "mass variation row {}", al);
    }
}

#[test]
fn spinor_sector_el_shapes() {
    for ctx in [euclid(), minkowski()] {
        let rep = ctx.verify_el_spinor(&q(3, 2));
        assert_eq!(rep.rows.len(), 4);
        for row in &rep.rows {
            assert_eq!(row.residual_terms, 0, "{} on {}", row.id, rep.algebra);
        }
    }
}

#[test]
fn exactness_split_examples() {
    // scalar toy: F = dy and X the y-variation, so the whole EL
    // contribution collapses to d(P)
    let mut dga = Dga::new();
    let y = dga.declare("y", 0);
    let dy = dga.declare("dy", 1);
    let pp = dga.declare("P", 9);
    let dpp = dga.declare("dP", 10);
    dga.set_rule(y, dga.monomial(&[dy], CQ::one()));
    dga.set_rule(dy, Element::zero());
    dga.set_rule(pp, dga.monomial(&[dpp], CQ::one()));
    dga.set_rule(dpp, Element::zero());
    let x = Contraction::new().with(dy, Element::scalar(CQ::one()));
    let p = dga.monomial(&[pp], CQ::one());
    let f = dga.monomial(&[dy], CQ::one());
    let split = multiplier_exactness(&dga, &p, &f, &x);
    assert_eq!(split.total, dga.monomial(&[dpp], CQ::one()));
    assert_eq!(split.primitive, p);
    assert_eq!(split.exact, split.total);
    assert!(split.lie.is_zero());
    assert!(split.residual().is_zero());

    // frame-bundle case: a constraint multiplier against the curvature
    // block it multiplies in Theta_EC, varied along the coframe
    let ctx = euclid();
    let x = ctx.coframe_contraction();
    let p = gen_elem(&ctx, ctx.p_gen(0, 0, 6).unwrap());
    let f = ctx.dga.mul(&gen_elem(&ctx, ctx.cap_gen(0)), &ctx.dual_lambda(&[0, 6]).unwrap());
    let split = multiplier_exactness(&ctx.dga, &p, &f, &x);
    assert!(split.residual().is_zero());
    assert!(!split.lie.is_zero());
    // even-degree multiplier: the primitive is the displayed -p ^ i_X F
    assert_eq!(split.primitive, ctx.dga.mul(&p, &ctx.dga.contract(&x, &f)).neg());
    assert_eq!(split.total, split.exact.add(&split.lie));

    // a contraction that touches nothing gives the zero split
    let silent = Contraction::new();
    let split = multiplier_exactness(&ctx.dga, &p, &f, &silent);
    assert!(split.total.is_zero() && split.primitive.is_zero() && split.lie.is_zero());
}
