// Oracle-backed tests for the exterior layer. Every oracle here is an
// independent implementation: signs come from explicit index-list sorting and
// inversion counting, never from the bitmask code under test.

use ecd_core::exterior::{dual_form, vol, Form, Poly};
use ecd_core::scalar::{q, Q};
use num::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

// sign of the permutation sorting `idx`, 0 on repeats
fn sort_sign(idx: &[usize]) -> i64 {
    let mut v = idx.to_vec();
    let mut sign = 1i64;
    for i in 0..v.len() {
        for j in (i + 1)..v.len() {
            if v[i] == v[j] {
                return 0;
            }
            if v[i] > v[j] {
                v.swap(i, j);
                sign = -sign;
            }
        }
    }
    sign
}

fn rand_poly(rng: &mut ChaCha20Rng, n: usize, deg: usize) -> Poly<Q> {
    let mut p = Poly::zero(n);
    for _ in 0..3 {
        let mut expo = vec![0u16; n];
        for _ in 0..deg {
            let i = rng.gen_range(0..n);
            expo[i] += 1;
        }
        let c = q(rng.gen_range(-4..5), rng.gen_range(1..4));
        p = p.add(&Poly::monomial(n, expo, c));
    }
    p
}

fn rand_form(rng: &mut ChaCha20Rng, n: usize, k: usize, deg: usize) -> Form<Q> {
    let mut f = Form::zero(n, k);
    for _ in 0..3 {
        let mut idx: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            idx.swap(i, j);
        }
        idx.truncate(k);
        idx.sort_unstable();
        f = f.add(&Form::from_indices(n, &idx, rand_poly(rng, n, deg)));
    }
    f
}

// wedge oracle: expand over all component pairs, sign by explicit sorting of
// the concatenated index lists
fn wedge_oracle(a: &Form<Q>, b: &Form<Q>) -> Form<Q> {
    let mut out = Form::zero(a.n(), a.k() + b.k());
    for (ia, pa) in a.terms() {
        for (ib, pb) in b.terms() {
            let mut cat = ia.clone();
            cat.extend_from_slice(&ib);
            let s = sort_sign(&cat);
            if s == 0 {
                continue;
            }
            let mut sorted = cat.clone();
            sorted.sort_unstable();
            let mut coeff = pa.mul(&pb);
            if s < 0 {
                coeff = coeff.neg();
            }
            out = out.add(&Form::from_indices(a.n(), &sorted, coeff));
        }
    }
    out
}

// single interior product oracle on index lists: i_{u_j}(e^J) drops j at its
// position with sign (-1)^pos
fn interior_one_oracle(j: usize, a: &Form<Q>) -> Form<Q> {
    if a.k() == 0 {
        return Form::zero(a.n(), 0);
    }
    let mut out = Form::zero(a.n(), a.k() - 1);
    for (idx, p) in a.terms() {
        if let Some(pos) = idx.iter().position(|&i| i == j) {
            let rest: Vec<usize> = idx.iter().copied().filter(|&i| i != j).collect();
            let mut c = p.clone();
            if pos % 2 == 1 {
                c = c.neg();
            }
            out = out.add(&Form::from_indices(a.n(), &rest, c));
        }
    }
    out
}

// iterated interior product: i_{X1^...^Xp} = i_{Xp} ... i_{X1}
fn interior_oracle(idx: &[usize], a: &Form<Q>) -> Form<Q> {
    let mut cur = a.clone();
    for &j in idx {
        cur = interior_one_oracle(j, &cur);
    }
    cur
}

// exterior derivative oracle: term-by-term partial derivatives with list signs
fn d_oracle(a: &Form<Q>) -> Form<Q> {
    let n = a.n();
    if a.k() == n {
        return Form::zero(n, n); // degree would exceed n; d of top form is 0 anyway
    }
    let mut out = Form::zero(n, a.k() + 1);
    for (idx, p) in a.terms() {
        for mu in 0..n {
            let dp = p.partial(mu);
            if dp.is_zero() {
                continue;
            }
            let mut cat = vec![mu];
            cat.extend_from_slice(&idx);
            let s = sort_sign(&cat);
            if s == 0 {
                continue;
            }
            let mut sorted = cat.clone();
            sorted.sort_unstable();
            out = out.add(&Form::from_indices(n, &sorted, if s < 0 { dp.neg() } else { dp }));
        }
    }
    out
}

#[test]
fn wedge_matches_permutation_oracle() {
    let mut rng = ChaCha20Rng::seed_from_u64(801);
    for n in [4usize, 10] {
        for _ in 0..20 {
            let ka = rng.gen_range(0..=2);
            let kb = rng.gen_range(0..=2);
            let a = rand_form(&mut rng, n, ka, 2);
            let b = rand_form(&mut rng, n, kb, 2);
            assert_eq!(a.wedge(&b), wedge_oracle(&a, &b));
        }
    }
}

#[test]
fn wedge_basic_examples() {
    // dx1 ^ dx2 = dx^{12}; dx1 ^ dx1 = 0; (x1 dx1 + dx2) ^ dx1 = -dx^{12}
    let n = 4;
    let dx = |i: usize| Form::from_indices(n, &[i], Poly::<Q>::one(n));
    assert_eq!(dx(0).wedge(&dx(1)), Form::from_indices(n, &[0, 1], Poly::one(n)));
    assert!(dx(0).wedge(&dx(0)).is_zero());
    let a = Form::from_indices(n, &[0], Poly::var(n, 0)).add(&dx(1));
    assert_eq!(
        a.wedge(&dx(0)),
        Form::from_indices(n, &[0, 1], Poly::one(n).neg())
    );
}

#[test]
fn interior_matches_iterated_oracle() {
    let mut rng = ChaCha20Rng::seed_from_u64(802);
    for n in [4usize, 10] {
        for _ in 0..25 {
            let k = rng.gen_range(0..=3.min(n));
            let a = rand_form(&mut rng, n, k, 1);
            let p = rng.gen_range(1..=2.min(k.max(1)));
            let idx: Vec<usize> = (0..p).map(|_| rng.gen_range(0..n)).collect();
            assert_eq!(a.interior_multi(&idx), interior_oracle(&idx, &a));
        }
    }
}

#[test]
fn interior_kronecker_pairing() {
    // u_I -| e^J = delta^J_I for increasing multi-indices of equal length
    for n in [4usize, 10] {
        let idxs: Vec<Vec<usize>> = (0..n)
            .flat_map(|a| ((a + 1)..n).map(move |b| vec![a, b]))
            .collect();
        for i in &idxs {
            for jj in &idxs {
                let e_j: Form<Q> = Form::from_indices(n, jj, Poly::one(n));
                let got = e_j.interior_multi(i);
                let want = if i == jj {
                    Form::from_indices(n, &[], Poly::one(n))
                } else {
                    Form::zero(n, 0)
                };
                assert_eq!(got, want, "u_{:?} -| e^{:?}", i, jj);
            }
        }
    }
}

#[test]
fn interior_order_convention() {
    // u_{21} -| e^{12} = -1: apply i_{u_2} first, then i_{u_1}
    let n = 4;
    let e12 = Form::from_indices(n, &[0, 1], Poly::<Q>::one(n));
    let got = e12.interior_multi(&[1, 0]);
    assert_eq!(got, Form::from_indices(n, &[], Poly::one(n).neg()));
    // u_1 -| e^{23} = 0
    let e23: Form<Q> = Form::from_indices(n, &[1, 2], Poly::one(n));
    assert!(e23.interior_multi(&[0]).is_zero());
}

#[test]
fn d_matches_term_oracle() {
    let mut rng = ChaCha20Rng::seed_from_u64(803);
    for n in [4usize, 10] {
        for _ in 0..20 {
            let k = rng.gen_range(0..=2);
            let a = rand_form(&mut rng, n, k, 3);
            assert_eq!(a.d(), d_oracle(&a));
        }
    }
}

#[test]
fn d_examples_and_nilpotency() {
    let n = 4;
    // d(x1 dx2) = dx^{12}
    let a = Form::from_indices(n, &[1], Poly::<Q>::var(n, 0));
    assert_eq!(a.d(), Form::from_indices(n, &[0, 1], Poly::one(n)));
    // d(x1 x2 dx3) = x2 dx^{13} + x1 dx^{23}
    let b = Form::from_indices(n, &[2], Poly::<Q>::var(n, 0).mul(&Poly::var(n, 1)));
    let want = Form::from_indices(n, &[0, 2], Poly::var(n, 1))
        .add(&Form::from_indices(n, &[1, 2], Poly::var(n, 0)));
    assert_eq!(b.d(), want);
    // d(d(random 2-form)) = 0
    let mut rng = ChaCha20Rng::seed_from_u64(804);
    for _ in 0..10 {
        let f = rand_form(&mut rng, n, 2, 3);
        assert!(f.d().d().is_zero());
    }
}

#[test]
fn dual_form_examples() {
    // n=4, I=(1,2) -> e^{34}; top index -> constant 1; pairing 5 e^{12} ^ dual = 5 vol
    let n = 4;
    assert_eq!(
        dual_form::<Q>(n, &[0, 1]),
        Form::from_indices(n, &[2, 3], Poly::one(n))
    );
    assert_eq!(
        dual_form::<Q>(n, &[0, 1, 2, 3]),
        Form::from_indices(n, &[], Poly::one(n))
    );
    let five = Form::from_indices(n, &[0, 1], Poly::constant(n, q(5, 1)));
    assert_eq!(
        five.wedge(&dual_form(n, &[0, 1])),
        Form::from_indices(n, &[0, 1, 2, 3], Poly::constant(n, q(5, 1)))
    );
}

#[test]
fn dual_pairing_all_multi_indices() {
    // (f_J e^J) ^ e^{(n-p)}_I = f_I vol, exhaustively over increasing I, n in {4,10}
    let mut rng = ChaCha20Rng::seed_from_u64(805);
    for n in [4usize, 10] {
        for p in 0..=4usize.min(n) {
            let combos = combinations(n, p);
            let alpha = rand_form(&mut rng, n, p, 2);
            for i in &combos {
                let f_i = alpha.coeff_at(i);
                let lhs = alpha.wedge(&dual_form(n, i));
                let rhs = vol(n).scale_poly(&f_i);
                assert_eq!(lhs, rhs, "pairing failed n={} I={:?}", n, i);
            }
        }
    }
}

#[test]
fn dual_form_equals_sign_complement() {
    // e^{(n-p)}_I = eps(I) e^{I^c}
    for n in [4usize, 10] {
        for p in 0..=n.min(4) {
            for i in combinations(n, p) {
                let comp: Vec<usize> = (0..n).filter(|x| !i.contains(x)).collect();
                let mut cat = i.clone();
                cat.extend_from_slice(&comp);
                let s = sort_sign(&cat);
                let want = if s < 0 {
                    Form::from_indices(n, &comp, Poly::<Q>::one(n).neg())
                } else {
                    Form::from_indices(n, &comp, Poly::<Q>::one(n))
                };
                assert_eq!(dual_form(n, &i), want);
            }
        }
    }
}

fn combinations(n: usize, p: usize) -> Vec<Vec<usize>> {
    if p == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..p).collect();
    loop {
        out.push(cur.clone());
        let mut i = p;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - p {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in (i + 1)..p {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn poly_ring_axioms(seed in 0u64..1 << 20) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let n = 4;
        let a = rand_poly(&mut rng, n, 2);
        let b = rand_poly(&mut rng, n, 2);
        let c = rand_poly(&mut rng, n, 2);
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn wedge_assoc_graded_comm(seed in 0u64..1 << 20) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let n = 6;
        let ka = rng.gen_range(0..=2);
        let kb = rng.gen_range(0..=2);
        let kc = rng.gen_range(0..=2);
        let a = rand_form(&mut rng, n, ka, 2);
        let b = rand_form(&mut rng, n, kb, 2);
        let c = rand_form(&mut rng, n, kc, 2);
        prop_assert_eq!(a.wedge(&b).wedge(&c), a.wedge(&b.wedge(&c)));
        let ba = b.wedge(&a);
        let flip = if (ka * kb) % 2 == 1 { ba.neg() } else { ba };
        prop_assert_eq!(a.wedge(&b), flip);
    }

    #[test]
    fn leibniz_and_nilpotency(seed in 0u64..1 << 20) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let n = 5;
        let ka = rng.gen_range(0..=2usize);
        let a = rand_form(&mut rng, n, ka, 3);
        let kb = rng.gen_range(0..=2);
        let b = rand_form(&mut rng, n, kb, 3);
        let lhs = a.wedge(&b).d();
        let mut rhs = a.d().wedge(&b);
        let adb = a.wedge(&b.d());
        rhs = if ka % 2 == 1 { rhs.sub(&adb) } else { rhs.add(&adb) };
        prop_assert_eq!(lhs, rhs);
        prop_assert!(a.d().d().is_zero());
    }

    #[test]
    fn poly_eval_partial_consistency(seed in 0u64..1 << 20) {
        // partial then eval agrees with a finite single-variable expansion check:
        // p(x) - p(y at x_i replaced) has factor (x_i - y_i); verify at sample points
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let n = 4;
        let p = rand_poly(&mut rng, n, 3);
        let pt: Vec<Q> = (0..n).map(|_| q(rng.gen_range(-3..4), rng.gen_range(1..3))).collect();
        // d/dx_i of x_i^k -> k x_i^{k-1}: cross-check one variable by divided difference
        // with symbolic second point equal to pt except in slot i
        for i in 0..n {
            let dp = p.partial(i);
            // Evaluate the defining limit algebraically: p = sum c x^e, so
            // partial eval must equal sum c e_i pt^(e - delta_i)
            let mut acc = Q::zero();
            for (expo, c) in p.terms() {
                if expo[i] == 0 { continue; }
                let mut v = c.clone() * q(expo[i] as i64, 1);
                for (jj, &e) in expo.iter().enumerate() {
                    let pw = if jj == i { e - 1 } else { e };
                    for _ in 0..pw {
                        v = v * pt[jj].clone();
                    }
                }
                acc = acc + v;
            }
            prop_assert_eq!(dp.eval(&pt), acc);
        }
    }
}
