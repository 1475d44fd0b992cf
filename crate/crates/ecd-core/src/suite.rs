//! Seeded batch verification over every identity the library exposes.
//!
//! Checks carry stable ids and run with per-check deterministic randomness
//! derived from the master seed, so reports from equal configurations are
//! identical up to wall-time fields regardless of scheduling. Identity
//! checks must come out with zero surviving residual terms; rows marked
//! informational are reported but do not gate the overall status.

use std::time::Instant;

use num::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{self, lc_contraction_residual, Signature};
use crate::clifford::{anticom_residual, build_rep, commchir_residual};
use crate::dga::{multiplier_exactness, EcdDga};
use crate::exterior::{dual_form, vol, Form, Poly};
use crate::fieldeq::{
    axial_connection, axial_dual, axial_form, bianchi_belinfante_check, decompose_torsion,
    ecd_residuals, lc_comparison, torsion_matching_connection, zero_rank3, FieldState, Rank3,
};
use crate::geometry::{
    bianchi_residual, cartan_bracket_identity, einstein_contraction, mc_coframe, mc_residual,
    ricci_variation, torsion_trace_companion, CartanCoframe, GeometryState,
};
use crate::linalg::{det, inverse, Mat};
use crate::scalar::{cq, q, qi, Coeff, CQ, Q};

/// named check groups; `all` on the command line expands to every entry
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SuiteName {
    Duals,
    Clifford,
    Dga,
    El,
    Bianchi,
    Fieldeq,
}

impl SuiteName {
    pub const ALL: [SuiteName; 6] = [
        SuiteName::Duals,
        SuiteName::Clifford,
        SuiteName::Dga,
        SuiteName::El,
        SuiteName::Bianchi,
        SuiteName::Fieldeq,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Duals => "duals",
            SuiteName::Clifford => "clifford",
            SuiteName::Dga => "dga",
            SuiteName::El => "el",
            SuiteName::Bianchi => "bianchi",
            SuiteName::Fieldeq => "fieldeq",
        }
    }

    pub fn parse(s: &str) -> Option<Vec<SuiteName>> {
        if s == "all" {
            return Some(SuiteName::ALL.to_vec());
        }
        SuiteName::ALL.iter().copied().find(|n| n.as_str() == s).map(|n| vec![n])
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub sig: Signature,
    pub seed: u64,
    pub trials: usize,
    pub degree: usize,
    pub suites: Vec<SuiteName>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            sig: Signature::new(4, 0),
            seed: 7,
            trials: 25,
            degree: 2,
            suites: SuiteName::ALL.to_vec(),
        }
    }
}

/// one verified check; `residual_terms` counts surviving monomials or
/// nonzero array entries after forming the exact difference
#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub detail: String,
    pub params: String,
    pub residual_terms: usize,
    pub informational: bool,
    pub status: String,
    pub millis: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub sig: String,
    pub seed: u64,
    pub trials: usize,
    pub degree: usize,
    pub suites: Vec<String>,
    pub checks: Vec<CheckRecord>,
    pub passed: bool,
    pub total_millis: u128,
}

impl Report {
    pub fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    /// timing-stripped rendering: equal configurations must produce equal
    /// canonical reports
    pub fn canonical_json(&self) -> String {
        let mut r = self.clone();
        r.total_millis = 0;
        for c in &mut r.checks {
            c.millis = 0;
        }
        serde_json::to_string_pretty(&r).expect("report serialization")
    }
}

/// process exit contract: 0 all identity checks pass, 1 otherwise
/// (input and configuration errors exit 2 before a report exists)
pub fn exit_code(report: &Report) -> i32 {
    if report.passed {
        0
    } else {
        1
    }
}

struct RowOut {
    id: String,
    detail: String,
    residual_terms: usize,
    informational: bool,
}

impl RowOut {
    fn new(id: impl Into<String>, detail: impl Into<String>, residual_terms: usize) -> RowOut {
        RowOut { id: id.into(), detail: detail.into(), residual_terms, informational: false }
    }

    fn info(mut self) -> RowOut {
        self.informational = true;
        self
    }
}

type JobFn = Box<dyn Fn(&mut ChaCha20Rng) -> Vec<RowOut> + Send + Sync>;

struct Job {
    id: String,
    run: JobFn,
}

impl Job {
    fn new(id: impl Into<String>, run: JobFn) -> Job {
        Job { id: id.into(), run }
    }
}

/// per-check stream: stable under scheduling and suite selection
fn check_rng(seed: u64, id: &str) -> ChaCha20Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    for (i, b) in id.as_bytes().iter().enumerate() {
        key[8 + (i % 24)] ^= b.wrapping_mul(131).wrapping_add(i as u8);
    }
    ChaCha20Rng::from_seed(key)
}

pub fn run_suite(cfg: &SuiteConfig) -> Report {
    let t0 = Instant::now();
    let params = format!(
        "sig={} seed={} trials={} degree={}",
        cfg.sig.label(),
        cfg.seed,
        cfg.trials,
        cfg.degree
    );
    let jobs = build_jobs(cfg);
    let checks: Vec<CheckRecord> = jobs
        .into_par_iter()
        .flat_map(|job| {
            let mut rng = check_rng(cfg.seed, &job.id);
            let start = Instant::now();
            let rows = (job.run)(&mut rng);
            let ms = start.elapsed().as_millis();
            rows.into_iter()
                .map(|r| {
                    let status = if r.residual_terms == 0 {
                        "pass"
                    } else if r.informational {
                        "info"
                    } else {
                        "fail"
                    };
                    CheckRecord {
                        id: r.id,
                        detail: r.detail,
                        params: params.clone(),
                        residual_terms: r.residual_terms,
                        informational: r.informational,
                        status: status.to_string(),
                        millis: ms,
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let passed = checks.iter().all(|c| c.status != "fail");
    Report {
        sig: cfg.sig.label(),
        seed: cfg.seed,
        trials: cfg.trials,
        degree: cfg.degree,
        suites: cfg.suites.iter().map(|s| s.as_str().to_string()).collect(),
        checks,
        passed,
        total_millis: t0.elapsed().as_millis(),
    }
}

fn build_jobs(cfg: &SuiteConfig) -> Vec<Job> {
    let mut jobs = Vec::new();
    for &s in &cfg.suites {
        match s {
            SuiteName::Duals => duals_jobs(cfg, &mut jobs),
            SuiteName::Clifford => clifford_jobs(&mut jobs),
            SuiteName::Dga => dga_jobs(cfg, &mut jobs),
            SuiteName::El => el_jobs(cfg, &mut jobs),
            SuiteName::Bianchi => bianchi_jobs(cfg, &mut jobs),
            SuiteName::Fieldeq => fieldeq_jobs(cfg, &mut jobs),
        }
    }
    jobs
}

// shared random draws

fn rq(rng: &mut ChaCha20Rng, span: i64, dmax: i64) -> Q {
    q(rng.gen_range(-span..=span), rng.gen_range(1..=dmax))
}

fn random_poly(rng: &mut ChaCha20Rng, n: usize, degree: usize, terms: usize) -> Poly<Q> {
    let mut p = Poly::zero(n);
    for _ in 0..rng.gen_range(1..=terms) {
        let mut expo = vec![0u16; n];
        for _ in 0..rng.gen_range(0..=degree) {
            expo[rng.gen_range(0..n)] += 1;
        }
        p = p.add(&Poly::monomial(n, expo, rq(rng, 2, 3)));
    }
    p
}

fn random_point(rng: &mut ChaCha20Rng) -> Vec<Q> {
    (0..4).map(|_| rq(rng, 1, 3)).collect()
}

/// identity vielbein plus a small polynomial perturbation and a random
/// connection, with three sample points registered (retry until the
/// vielbein is invertible at all of them)
fn random_state(rng: &mut ChaCha20Rng, sig: Signature, degree: usize) -> GeometryState {
    loop {
        let e: Vec<Vec<Poly<Q>>> = (0..4)
            .map(|a| {
                (0..4)
                    .map(|mu| {
                        let base = if a == mu { Poly::one(4) } else { Poly::zero(4) };
                        if rng.gen_range(0..3) == 0 {
                            base.add(&random_poly(rng, 4, degree, 1).scale_q(&q(1, 3)))
                        } else {
                            base
                        }
                    })
                    .collect()
            })
            .collect();
        let omega: Vec<Vec<Poly<Q>>> = (0..6)
            .map(|_| {
                (0..4)
                    .map(|_| {
                        if rng.gen_range(0..2) == 0 {
                            random_poly(rng, 4, degree, 2)
                        } else {
                            Poly::zero(4)
                        }
                    })
                    .collect()
            })
            .collect();
        let mut st = GeometryState::new(sig, e, omega);
        let mut pts = vec![vec![Q::zero(); 4]];
        pts.push(random_point(rng));
        pts.push(random_point(rng));
        if pts.into_iter().try_for_each(|p| st.register_point(p)).is_ok() {
            return st;
        }
    }
}

fn random_psi(rng: &mut ChaCha20Rng, degree: usize) -> Vec<Poly<CQ>> {
    (0..4)
        .map(|_| {
            random_poly(rng, 4, degree, 2)
                .map_coeff(|c| cq(c.clone(), Q::zero()))
                .add(&random_poly(rng, 4, degree, 1).map_coeff(|c| cq(Q::zero(), c.clone())))
        })
        .collect()
}

fn count_mat<C: Coeff>(m: &Mat<C>) -> usize {
    let mut n = 0;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if !m.at(i, j).is_zero() {
                n += 1;
            }
        }
    }
    n
}

fn count_vec<C: Coeff>(v: &[C]) -> usize {
    v.iter().filter(|x| !x.is_zero()).count()
}

fn count_q(r: &Q) -> usize {
    usize::from(!r.is_zero())
}

fn count_rank3(t: &Rank3) -> usize {
    t.iter().flatten().flatten().filter(|x| !x.is_zero()).count()
}

// duals

fn duals_jobs(cfg: &SuiteConfig, jobs: &mut Vec<Job>) {
    for n in [4usize, 10] {
        let trials = cfg.trials;
        let degree = cfg.degree;
        jobs.push(Job::new(
            format!("duals/pairing-n{}", n),
            Box::new(move |rng| {
                let subset = |rng: &mut ChaCha20Rng, k: usize| -> Vec<usize> {
                    let mut pool: Vec<usize> = (0..n).collect();
                    for i in 0..k {
                        let j = rng.gen_range(i..n);
                        pool.swap(i, j);
                    }
                    let mut s = pool[..k].to_vec();
                    s.sort_unstable();
                    s
                };
                let mut bad = 0;
                for _ in 0..trials {
                    for k in 0..=4usize {
                        let idx = subset(rng, k);
                        // seed with a term at I itself so f_I is generically nonzero
                        let mut f = Form::from_indices(n, &idx, random_poly(rng, n, degree, 2));
                        for _ in 0..3 {
                            let sel = subset(rng, k);
                            f = f.add(&Form::from_indices(n, &sel, random_poly(rng, n, degree, 2)));
                        }
                        let got = f.wedge(&dual_form::<Q>(n, &idx));
                        let want = vol::<Q>(n).scale_poly(&f.coeff_at(&idx));
                        if !got.sub(&want).is_zero() {
                            bad += 1;
                        }
                    }
                }
                vec![RowOut::new(
                    format!("duals/pairing-n{}", n),
                    format!("(f_J e^J) ^ e^({}-k)_I = f_I vol for random forms, k <= 4", n),
                    bad,
                )]
            }),
        ));
    }
    for (p, qq) in [(4usize, 0usize), (1, 3)] {
        jobs.push(Job::new(
            format!("duals/eps-contraction-p{}q{}", p, qq),
            Box::new(move |_| {
                let r = lc_contraction_residual(Signature::new(p, qq));
                vec![RowOut::new(
                    format!("duals/eps-contraction-p{}q{}", p, qq),
                    "1/2 eps eps double contraction against the delta bilinear, all 256 index assignments",
                    count_q(&r),
                )]
            }),
        ));
    }
}

// clifford

fn clifford_jobs(jobs: &mut Vec<Job>) {
    for (p, qq) in [(4usize, 0usize), (3, 1), (1, 3), (0, 4)] {
        let tag = format!("p{}q{}", p, qq);
        jobs.push(Job::new(
            format!("clifford/suite-{}", tag),
            Box::new(move |_| {
                let sig = Signature::new(p, qq);
                let rep = build_rep(sig);
                let tag = format!("p{}q{}", p, qq);
                let mut rows = Vec::new();
                rows.push(RowOut::new(
                    format!("clifford/anticom-{}", tag),
                    "gamma_a gamma_b + gamma_b gamma_a = -2 eta_{ab} Id over all pairs",
                    count_q(&anticom_residual(&rep)),
                ));
                let vsq = rep
                    .gamma5
                    .mul(&rep.gamma5)
                    .sub(&Mat::identity(4).scale(&cq(qi(sig.vol_sign()), Q::zero())));
                rows.push(RowOut::new(
                    format!("clifford/volume-square-{}", tag),
                    "gamma5 squared equals (-1)^q",
                    count_mat(&vsq),
                ));
                let bs = rep.beta_signature();
                let metric_ok = if p == 4 || qq == 4 {
                    bs == (4, 0) || bs == (0, 4)
                } else {
                    bs == (2, 2)
                };
                rows.push(RowOut::new(
                    format!("clifford/spinor-metric-{}", tag),
                    "hermitian spinor metric: definite in the definite signatures, split (2,2) otherwise",
                    usize::from(!metric_ok),
                ));
                rows.push(RowOut::new(
                    format!("clifford/sigma-gamma-dual-{}", tag),
                    "1/2 {sigma_{mu nu}, gamma_tau} = eps_{mu nu tau ups} gamma^ups gamma5, all 64 triples",
                    count_q(&commchir_residual(&rep)),
                ));
                rows
            }),
        ));
    }
}

// dga

enum AlgPick {
    Abelian,
    Semidirect(usize, usize),
}

fn dga_context(pick: &AlgPick) -> (EcdDga, String) {
    match *pick {
        AlgPick::Abelian => (EcdDga::new(algebra::abelian(10), None), "abelian".to_string()),
        AlgPick::Semidirect(p, qq) => {
            let sig = Signature::new(p, qq);
            let ctx = EcdDga::new(algebra::semidirect(&algebra::so_basis(sig)), Some(build_rep(sig)));
            (ctx, format!("p{}q{}", p, qq))
        }
    }
}

const ALG_PICKS: [AlgPick; 3] =
    [AlgPick::Abelian, AlgPick::Semidirect(4, 0), AlgPick::Semidirect(1, 3)];

fn dga_jobs(cfg: &SuiteConfig, jobs: &mut Vec<Job>) {
    for pick in ALG_PICKS.iter() {
        let (_, tag) = dga_context(pick);
        let pick = match *pick {
            AlgPick::Abelian => AlgPick::Abelian,
            AlgPick::Semidirect(p, qq) => AlgPick::Semidirect(p, qq),
        };
        jobs.push(Job::new(
            format!("dga/universal-{}", tag),
            Box::new(move |_| {
                let (ctx, tag) = dga_context(&pick);
                let rep = ctx.verify_universal();
                rep.rows
                    .into_iter()
                    .map(|r| {
                        RowOut::new(
                            format!("dga/{}-{}", r.id, tag),
                            "graded-derivation identity on the dual coframe forms",
                            r.residual_terms,
                        )
                    })
                    .collect()
            }),
        ));
    }
    let total = cfg.trials.max(25) * 4;
    jobs.push(Job::new(
        "dga/d-squared-random",
        Box::new(move |rng| {
            let (ctx, _) = dga_context(&AlgPick::Semidirect(4, 0));
            let mut bad = 0;
            for _ in 0..total {
                let e = random_dga_element(&ctx, rng);
                if !ctx.dga.d(&ctx.dga.d(&e)).is_zero() {
                    bad += 1;
                }
            }
            vec![RowOut::new(
                "dga/d-squared-random",
                format!("d(d(x)) = 0 on {} random elements", total),
                bad,
            )]
        }),
    ));
    jobs.push(Job::new(
        "dga/leibniz-random",
        Box::new(move |rng| {
            let (ctx, _) = dga_context(&AlgPick::Semidirect(1, 3));
            let mut bad = 0;
            for _ in 0..total {
                let n = ctx.dga.gen_count() as u32;
                let k = rng.gen_range(1..=4usize);
                let gens: Vec<u32> = (0..k).map(|_| rng.gen_range(0..n)).collect();
                let a = ctx.dga.monomial(&gens, cq(Q::one(), Q::zero()));
                let deg = ctx.dga.monomial_degree(&gens);
                let b = random_dga_element(&ctx, rng);
                let lhs = ctx.dga.d(&ctx.dga.mul(&a, &b));
                let adb = ctx.dga.mul(&a, &ctx.dga.d(&b));
                let mut rhs = ctx.dga.mul(&ctx.dga.d(&a), &b);
                rhs = if deg % 2 == 1 { rhs.sub(&adb) } else { rhs.add(&adb) };
                if !lhs.sub(&rhs).is_zero() {
                    bad += 1;
                }
            }
            vec![RowOut::new(
                "dga/leibniz-random",
                format!("d(ab) = (da)b + (-1)^|a| a(db) on {} random pairs", total),
                bad,
            )]
        }),
    ));
}

fn random_dga_element(ctx: &EcdDga, rng: &mut ChaCha20Rng) -> crate::dga::Element {
    let n = ctx.dga.gen_count() as u32;
    let mut e = crate::dga::Element::zero();
    for _ in 0..rng.gen_range(1..=4usize) {
        let k = rng.gen_range(1..=5usize);
        let gens: Vec<u32> = (0..k).map(|_| rng.gen_range(0..n)).collect();
        e = e.add(&ctx.dga.monomial(&gens, cq(rq(rng, 9, 9), Q::zero())));
    }
    e
}

// el

fn el_jobs(cfg: &SuiteConfig, jobs: &mut Vec<Job>) {
    for pick in ALG_PICKS.iter() {
        let (_, tag) = dga_context(pick);
        let pick_m = match *pick {
            AlgPick::Abelian => AlgPick::Abelian,
            AlgPick::Semidirect(p, qq) => AlgPick::Semidirect(p, qq),
        };
        jobs.push(Job::new(
            format!("el/multiplier-{}", tag),
            Box::new(move |_| {
                let (ctx, tag) = dga_context(&pick_m);
                let rep = ctx.verify_el_multiplier();
                rep.rows
                    .into_iter()
                    .map(|r| {
                        RowOut::new(
                            format!("el/multiplier-{}", tag),
                            "each multiplier variation of the gravitational form returns 1/2 cap^A lam^(8)_BC",
                            r.residual_terms,
                        )
                    })
                    .collect()
            }),
        ));
        let pick_c = match *pick {
            AlgPick::Abelian => AlgPick::Abelian,
            AlgPick::Semidirect(p, qq) => AlgPick::Semidirect(p, qq),
        };
        jobs.push(Job::new(
            format!("el/coframe-{}", tag),
            Box::new(move |_| {
                let (ctx, tag) = dga_context(&pick_c);
                let rep = ctx.verify_el_coframe();
                rep.rows
                    .into_iter()
                    .map(|r| {
                        let suffix = if r.id.ends_with("frozen") { "coframe-frozen" } else { "coframe" };
                        RowOut::new(
                            format!("el/{}-{}", suffix, tag),
                            "coframe variation of the gravitational form against its closed Euler-Lagrange shape",
                            r.residual_terms,
                        )
                    })
                    .collect()
            }),
        ));
        let pick_x = match *pick {
            AlgPick::Abelian => AlgPick::Abelian,
            AlgPick::Semidirect(p, qq) => AlgPick::Semidirect(p, qq),
        };
        let trials = cfg.trials;
        jobs.push(Job::new(
            format!("el/exactness-{}", tag),
            Box::new(move |rng| {
                let (ctx, tag) = dga_context(&pick_x);
                let x = ctx.coframe_contraction();
                let pairs = crate::dga::nonbc_pairs(&ctx.alg);
                let mut bad = 0;
                for _ in 0..trials {
                    let a = rng.gen_range(0..ctx.alg.dim);
                    let &(b, c) = &pairs[rng.gen_range(0..pairs.len())];
                    let pg = ctx.p_gen(a, b, c).expect("declared pair");
                    let p = ctx.dga.monomial(&[pg], cq(rq(rng, 3, 2), Q::zero()));
                    let d = rng.gen_range(0..ctx.alg.dim);
                    let &(bb, cc) = &pairs[rng.gen_range(0..pairs.len())];
                    let f = ctx
                        .dga
                        .mul(&ctx.dga.monomial(&[ctx.cap_gen(d)], cq(Q::one(), Q::zero())),
                             &ctx.dual_lambda(&[bb, cc]).expect("distinct"));
                    let split = multiplier_exactness(&ctx.dga, &p, &f, &x);
                    if !split.residual().is_zero() {
                        bad += 1;
                    }
                    if split.exact != ctx.dga.d(&split.primitive) {
                        bad += 1;
                    }
                }
                vec![RowOut::new(
                    format!("el/exactness-{}", tag),
                    format!(
                        "i_X d(p^F) splits into d(-i_X(p^F)) plus p ^ L_X F on {} random draws",
                        trials
                    ),
                    bad,
                )]
            }),
        ));
    }
    for (p, qq) in [(4usize, 0usize), (1, 3)] {
        jobs.push(Job::new(
            format!("el/spinor-p{}q{}", p, qq),
            Box::new(move |_| {
                let (ctx, tag) = dga_context(&AlgPick::Semidirect(p, qq));
                let rep = ctx.verify_el_spinor(&q(3, 2));
                rep.rows
                    .into_iter()
                    .map(|r| {
                        let suffix = r.id.trim_start_matches("el-");
                        RowOut::new(
                            format!("el/{}-{}", suffix, tag),
                            "spinor-sector variations of the Dirac form against their closed shapes",
                            r.residual_terms,
                        )
                    })
                    .collect()
            }),
        ));
    }
}

// bianchi (chart-level geometry identities)

fn bianchi_jobs(cfg: &SuiteConfig, jobs: &mut Vec<Job>) {
    let sig = cfg.sig;
    let trials = cfg.trials;
    let degree = cfg.degree;
    jobs.push(Job::new(
        "bianchi/random-states",
        Box::new(move |rng| {
            let mut bad = 0;
            for _ in 0..trials {
                let st = random_state(rng, sig, degree);
                for pt in st.points() {
                    bad += count_mat(&bianchi_residual(&st, pt).expect("registered point"));
                }
            }
            vec![RowOut::new(
                "bianchi/random-states",
                format!(
                    "antisymmetric Ricci part equals the covariant torsion divergence on {} states x 3 points",
                    trials
                ),
                bad,
            )]
        }),
    ));
    jobs.push(Job::new(
        "bianchi/ricci-variation",
        Box::new(move |rng| {
            let mut bad = 0;
            for _ in 0..trials {
                let st = random_state(rng, sig, degree);
                let tau: Vec<Vec<Poly<Q>>> = (0..6)
                    .map(|_| (0..4).map(|_| random_poly(rng, 4, degree, 1)).collect())
                    .collect();
                let pt = st.points()[0].clone();
                bad += count_mat(&ricci_variation(&st, &tau, &pt).expect("registered point"));
            }
            vec![RowOut::new(
                "bianchi/ricci-variation",
                format!(
                    "Ric(omega+tau) - Ric(omega) equals the traced covariant shift on {} pairs",
                    trials
                ),
                bad,
            )]
        }),
    ));
    jobs.push(Job::new(
        "bianchi/einstein-contraction",
        Box::new(move |rng| {
            let mut bad = 0;
            let mut companion = 0;
            for _ in 0..trials {
                let st = random_state(rng, sig, degree);
                let pt = st.points()[1].clone();
                bad += count_mat(&einstein_contraction(&st, &pt).expect("registered point"));
                for m in torsion_trace_companion(&st, &pt).expect("registered point") {
                    companion += count_mat(&m);
                }
            }
            vec![
                RowOut::new(
                    "bianchi/einstein-contraction",
                    format!(
                        "multiplier-curvature contraction equals -2 Ric + Scal Id on {} states",
                        trials
                    ),
                    bad,
                ),
                RowOut::new(
                    "bianchi/einstein-companion",
                    "curvature trace companion matches the torsion-plus-trace tensor shape",
                    companion,
                ),
            ]
        }),
    ));
    jobs.push(Job::new(
        "bianchi/cartan-bracket",
        Box::new(move |rng| {
            let alg = algebra::semidirect(&algebra::so_basis(sig));
            let n = alg.dim;
            let mut bad = 0;
            for _ in 0..trials.max(10) {
                let cf = loop {
                    let w: Vec<Form<Q>> = (0..n)
                        .map(|a| {
                            let mut f = Form::from_indices(n, &[a], Poly::one(n));
                            for _ in 0..2 {
                                let m = rng.gen_range(0..n);
                                let mut p = Poly::zero(n);
                                let v = rng.gen_range(0..n);
                                p = p.add(&Poly::var(n, v).scale_q(&rq(rng, 1, 4)));
                                f = f.add(&Form::from_indices(n, &[m], p));
                            }
                            f
                        })
                        .collect();
                    let mut cf = CartanCoframe::new(alg.clone(), w);
                    let pt: Vec<Q> = (0..n).map(|_| rq(rng, 1, 4)).collect();
                    if cf.register_point(pt).is_ok() {
                        break cf;
                    }
                };
                let h: Vec<Q> = (0..n).map(|_| rq(rng, 2, 3)).collect();
                let xi: Vec<Q> = (0..n).map(|_| rq(rng, 2, 3)).collect();
                let pt = cf.points()[0].clone();
                bad += count_vec(&cartan_bracket_identity(&cf, &h, &xi, &pt).expect("registered"));
            }
            vec![RowOut::new(
                "bianchi/cartan-bracket",
                format!(
                    "coframe image of the lifted bracket matches the algebra bracket minus structure correction, {} coframes",
                    trials.max(10)
                ),
                bad,
            )]
        }),
    ));
    jobs.push(Job::new(
        "bianchi/maurer-cartan",
        Box::new(move |rng| {
            let alg = algebra::nilpotent2_free(4);
            let cf = mc_coframe(&alg);
            let mut bad = 0;
            for f in mc_residual(&cf) {
                if !f.is_zero() {
                    bad += 1;
                }
            }
            let n = alg.dim;
            for _ in 0..5 {
                let h: Vec<Q> = (0..n).map(|_| rq(rng, 2, 3)).collect();
                let xi: Vec<Q> = (0..n).map(|_| rq(rng, 2, 3)).collect();
                let pt: Vec<Q> = (0..n).map(|_| rq(rng, 1, 3)).collect();
                bad += count_vec(&cartan_bracket_identity(&cf, &h, &xi, &pt).expect("invertible near 0"));
            }
            vec![RowOut::new(
                "bianchi/maurer-cartan",
                "structure equations vanish on the right-invariant coframe and the bracket identity holds there",
                bad,
            )]
        }),
    ));
}

// fieldeq

fn random_antisym_rank3(rng: &mut ChaCha20Rng) -> Rank3 {
    let mut t = zero_rank3();
    for tau in 0..4 {
        for mu in 0..4 {
            for nu in (mu + 1)..4 {
                let v = rq(rng, 3, 3);
                t[tau][mu][nu] = v.clone();
                t[tau][nu][mu] = -v;
            }
        }
    }
    t
}

fn random_metric(rng: &mut ChaCha20Rng, sig: Signature) -> (Mat<Q>, Q) {
    loop {
        let mut g = Mat::from_fn(4, 4, |a, b| if a == b { sig.eta(a) } else { Q::zero() });
        for a in 0..4 {
            for b in a..4 {
                if rng.gen_range(0..3) == 0 {
                    let v = rq(rng, 1, 4);
                    g.set(a, b, g.at(a, b).clone() + v.clone());
                    if a != b {
                        g.set(b, a, g.at(b, a).clone() + v);
                    }
                }
            }
        }
        let d = det(&g);
        if !d.is_zero() {
            return (g, d);
        }
    }
}

fn fieldeq_jobs(cfg: &SuiteConfig, jobs: &mut Vec<Job>) {
    let sig = cfg.sig;
    let trials = cfg.trials;
    let degree = cfg.degree;
    jobs.push(Job::new(
        "fieldeq/torsion-roundtrip",
        Box::new(move |rng| {
            let total = trials.max(25) * 4;
            let mut bad = 0;
            let mut axial_bad = 0;
            for _ in 0..total {
                let (g, vol) = random_metric(rng, sig);
                let ginv = inverse(&g).expect("nonzero determinant");
                let t = random_antisym_rank3(rng);
                let dec = decompose_torsion(&t, &g, &vol);
                for tau in 0..4 {
                    for mu in 0..4 {
                        for nu in 0..4 {
                            let tr_part = (dec.trace[nu].clone() * g.at(tau, mu).clone()
                                - dec.trace[mu].clone() * g.at(tau, nu).clone())
                                * q(1, 3);
                            let rebuilt = tr_part
                                + dec.axial[tau][mu][nu].clone()
                                + dec.pure[tau][mu][nu].clone();
                            bad += count_q(&(t[tau][mu][nu].clone() - rebuilt));
                            bad += count_q(
                                &(dec.axial[tau][mu][nu].clone() + dec.axial[mu][tau][nu].clone()),
                            );
                            let cyc = dec.pure[tau][mu][nu].clone()
                                + dec.pure[mu][nu][tau].clone()
                                + dec.pure[nu][tau][mu].clone();
                            bad += count_q(&cyc);
                        }
                    }
                }
                for nu in 0..4 {
                    let mut tr = Q::zero();
                    for tau in 0..4 {
                        for mu in 0..4 {
                            tr += ginv.at(tau, mu).clone() * dec.pure[tau][mu][nu].clone();
                        }
                    }
                    bad += count_q(&tr);
                }
                if axial_form(&dec.axial_vector, &vol) != dec.axial {
                    bad += 1;
                }
                // fully antisymmetric input: trace and pure parts vanish and
                // the axial vector round-trips through its 3-form
                let a: Vec<Q> = (0..4).map(|_| rq(rng, 3, 3)).collect();
                let a3 = axial_form(&a, &vol);
                if axial_dual(&a3, &vol) != a {
                    axial_bad += 1;
                }
                let dec2 = decompose_torsion(&a3, &g, &vol);
                axial_bad += count_vec(&dec2.trace);
                axial_bad += count_rank3(&dec2.pure);
            }
            vec![
                RowOut::new(
                    "fieldeq/torsion-roundtrip",
                    format!(
                        "trace + axial + pure reconstruction and part constraints on {} random torsions",
                        total
                    ),
                    bad,
                ),
                RowOut::new(
                    "fieldeq/torsion-axial",
                    "fully antisymmetric torsion has zero trace and pure parts; axial vector round-trips",
                    axial_bad,
                ),
            ]
        }),
    ));
    jobs.push(Job::new(
        "fieldeq/vacuum",
        Box::new(move |_| {
            let fs = FieldState::vacuum(sig, q(7, 3));
            let pt = vec![Q::zero(); 4];
            let rep = ecd_residuals(&fs, &pt).expect("flat state");
            let mut bad = count_mat(&rep.eq_ric) + count_vec(&rep.eq_dirac);
            for m in &rep.eq_tors {
                bad += count_mat(m);
            }
            bad += usize::from(!rep.identities_ok);
            vec![RowOut::new(
                "fieldeq/vacuum",
                "flat vielbein with vanishing spinor satisfies all three field equations exactly",
                bad,
            )]
        }),
    ));
    for (p, qq) in [(4usize, 0usize), (1, 3)] {
        let informational = !(p == 4 && qq == 0);
        jobs.push(Job::new(
            format!("fieldeq/lc-comparison-p{}q{}", p, qq),
            Box::new(move |rng| {
                let lsig = Signature::new(p, qq);
                let mut bad = 0;
                for _ in 0..trials {
                    let a: Vec<Q> = (0..4).map(|_| rq(rng, 2, 3)).collect();
                    let omega = axial_connection(lsig, &a);
                    let st =
                        GeometryState::new(lsig, GeometryState::flat(lsig).e.clone(), omega);
                    let fs = FieldState::new(st, random_psi(rng, 0), q(1, 1));
                    let rep = lc_comparison(&fs, &vec![Q::zero(); 4]).expect("axial by construction");
                    bad += count_mat(&rep.quadratic)
                        + count_q(&rep.scalar_shift)
                        + count_mat(&rep.kinetic)
                        + count_vec(&rep.dirac_shift);
                }
                let row = RowOut::new(
                    format!("fieldeq/lc-comparison-p{}q{}", p, qq),
                    format!(
                        "axial contorsion identities: quadratic, scalar shift, kinetic rewrite, Dirac shift ({} draws)",
                        trials
                    ),
                    bad,
                );
                vec![if informational { row.info() } else { row }]
            }),
        ));
    }
    jobs.push(Job::new(
        "fieldeq/matter-scaling",
        Box::new(move |rng| {
            let mut bad = 0;
            for _ in 0..trials.min(10).max(4) {
                let st = random_state(rng, sig, degree.min(1));
                let psi = random_psi(rng, 1);
                let fs1 = FieldState::new(st.clone(), psi.clone(), q(2, 1));
                let psi2: Vec<Poly<CQ>> = psi.iter().map(|p| p.scale(&cq(q(2, 1), Q::zero()))).collect();
                let fs2 = FieldState::new(st, psi2, q(2, 1));
                let pt = fs1.geom.points()[0].clone();
                let r1 = ecd_residuals(&fs1, &pt).expect("registered point");
                let r2 = ecd_residuals(&fs2, &pt).expect("registered point");
                let four = cq(q(4, 1), Q::zero());
                bad += count_mat(&r2.eq_ric_matter.sub(&r1.eq_ric_matter.scale(&four)));
                for mu in 0..r2.eq_tors_matter.len() {
                    bad += count_mat(
                        &r2.eq_tors_matter[mu].sub(&r1.eq_tors_matter[mu].scale(&four)),
                    );
                }
                bad += usize::from(!(r1.identities_ok && r2.identities_ok));
            }
            vec![RowOut::new(
                "fieldeq/matter-scaling",
                "doubling the spinor multiplies both stored matter term groups by exactly four",
                bad,
            )]
        }),
    ));
    jobs.push(Job::new(
        "fieldeq/torsion-matching",
        Box::new(move |rng| {
            let mut bad = 0;
            for _ in 0..trials {
                let psival: Vec<CQ> = (0..4).map(|_| cq(rq(rng, 2, 2), rq(rng, 2, 2))).collect();
                let omega = torsion_matching_connection(sig, &psival);
                let st = GeometryState::new(sig, GeometryState::flat(sig).e.clone(), omega);
                let psi: Vec<Poly<CQ>> = psival.iter().map(|v| Poly::constant(4, v.clone())).collect();
                let fs = FieldState::new(st, psi, q(1, 2));
                let rep = ecd_residuals(&fs, &vec![Q::zero(); 4]).expect("flat vielbein");
                for m in &rep.eq_tors {
                    bad += count_mat(m);
                }
            }
            vec![RowOut::new(
                "fieldeq/torsion-matching",
                format!(
                    "connection built from the spinor current satisfies the torsion equation, {} draws",
                    trials
                ),
                bad,
            )]
        }),
    ));
    jobs.push(Job::new(
        "fieldeq/belinfante",
        Box::new(move |rng| {
            let mut bad = 0;
            for _ in 0..trials {
                let fs = FieldState::new(random_state(rng, sig, degree), random_psi(rng, 1), q(1, 1));
                for pt in fs.geom.points().to_vec() {
                    bad += count_mat(&bianchi_belinfante_check(&fs, &pt).expect("registered point"));
                }
            }
            vec![RowOut::new(
                "fieldeq/belinfante",
                format!(
                    "asymmetric Ricci part against the torsion divergence on the matter side, {} states",
                    trials
                ),
                bad,
            )]
        }),
    ));
}
