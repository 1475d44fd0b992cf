//! Multivariate polynomials over an exact coefficient ring and polynomial
//! differential forms on a chart R^n. Basis index sets are stored as bitmasks;
//! all signs are computed by bit counting, which keeps wedge, interior product
//! and d exact and fast.

use crate::scalar::{q, Coeff, Q};
use std::collections::BTreeMap;
use std::fmt;

/// Bitmask over basis covectors e^0..e^{n-1}. n <= 16.
pub type Mask = u16;

pub fn mask_indices(m: Mask) -> Vec<usize> {
    (0..16).filter(|i| m >> i & 1 == 1).collect()
}

/// Mask and sorting sign for an index list; None if an index repeats.
fn mask_of(idx: &[usize]) -> Option<(Mask, bool)> {
    let mut m: Mask = 0;
    let mut neg = false;
    for &i in idx {
        debug_assert!(i < 16);
        let bit = 1u16 << i;
        if m & bit != 0 {
            return None;
        }
        // inversions added: elements already present that are larger than i
        if (m >> (i + 1)).count_ones() % 2 == 1 {
            neg = !neg;
        }
        m |= bit;
    }
    Some((m, neg))
}

/// Concatenation sign for disjoint masks a then b; None if they overlap.
fn merge_masks(a: Mask, b: Mask) -> Option<(Mask, bool)> {
    if a & b != 0 {
        return None;
    }
    let mut neg = false;
    let mut bb = b;
    while bb != 0 {
        let i = bb.trailing_zeros();
        if (a >> (i + 1)).count_ones() % 2 == 1 {
            neg = !neg;
        }
        bb &= bb - 1;
    }
    Some((a | b, neg))
}

/// Polynomial in n variables with coefficients in C, stored as a sparse
/// exponent-vector map. Zero coefficients are pruned, so equality is
/// structural equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<C: Coeff> {
    n: usize,
    terms: BTreeMap<Vec<u16>, C>,
}

impl<C: Coeff> Poly<C> {
    pub fn zero(n: usize) -> Self {
        Poly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: C) -> Self {
        let mut p = Poly::zero(n);
        if !c.is_zero() {
            p.terms.insert(vec![0; n], c);
        }
        p
    }

    pub fn one(n: usize) -> Self {
        Poly::constant(n, C::one())
    }

    /// The coordinate function x_i (0-based).
    pub fn var(n: usize, i: usize) -> Self {
        assert!(i < n);
        let mut expo = vec![0u16; n];
        expo[i] = 1;
        Poly::monomial(n, expo, C::one())
    }

    pub fn monomial(n: usize, expo: Vec<u16>, c: C) -> Self {
        assert_eq!(expo.len(), n);
        let mut p = Poly::zero(n);
        if !c.is_zero() {
            p.terms.insert(expo, c);
        }
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u16>, &C)> {
        self.terms.iter()
    }

    fn insert(&mut self, expo: Vec<u16>, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(expo) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().clone() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    e.insert(s);
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Poly::zero(self.n);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), -c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = Poly::zero(self.n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let expo: Vec<u16> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert(expo, ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Poly::zero(self.n);
        for (e, v) in &self.terms {
            let s = v.clone() * c.clone();
            if !s.is_zero() {
                out.terms.insert(e.clone(), s);
            }
        }
        out
    }

    pub fn scale_q(&self, r: &Q) -> Self {
        self.scale(&C::from_q(r))
    }

    /// Partial derivative with respect to x_i.
    pub fn partial(&self, i: usize) -> Self {
        assert!(i < self.n);
        let mut out = Poly::zero(self.n);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut expo = e.clone();
            expo[i] -= 1;
            out.insert(expo, c.clone() * C::from_q(&q(e[i] as i64, 1)));
        }
        out
    }

    pub fn eval(&self, pt: &[Q]) -> C {
        assert_eq!(pt.len(), self.n);
        let mut acc = C::zero();
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for (i, &p) in e.iter().enumerate() {
                let x = C::from_q(&pt[i]);
                for _ in 0..p {
                    v = v * x.clone();
                }
            }
            acc = acc + v;
        }
        acc
    }

    pub fn map_coeff<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        let mut out = Poly::zero(self.n);
        for (e, c) in &self.terms {
            let d = f(c);
            if !d.is_zero() {
                out.terms.insert(e.clone(), d);
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        self.map_coeff(|c| c.conj())
    }

    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .max()
            .unwrap_or(0)
    }
}

impl<C: Coeff> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", c)?;
            for (i, &p) in e.iter().enumerate() {
                if p == 1 {
                    write!(f, "*x{}", i + 1)?;
                } else if p > 1 {
                    write!(f, "*x{}^{}", i + 1, p)?;
                }
            }
        }
        Ok(())
    }
}

/// Differential form of degree k on R^n with polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form<C: Coeff> {
    n: usize,
    k: usize,
    terms: BTreeMap<Mask, Poly<C>>,
}

impl<C: Coeff> Form<C> {
    pub fn zero(n: usize, k: usize) -> Self {
        Form { n, k, terms: BTreeMap::new() }
    }

    /// p * e^{i_1} ^ ... ^ e^{i_k}; index repetition gives the zero form, an
    /// unsorted index list contributes its sorting sign.
    pub fn from_indices(n: usize, idx: &[usize], p: Poly<C>) -> Self {
        let mut f = Form::zero(n, idx.len());
        if let Some((m, neg)) = mask_of(idx) {
            let coeff = if neg { p.neg() } else { p };
            if !coeff.is_zero() {
                f.terms.insert(m, coeff);
            }
        }
        f
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Owned (increasing index list, coefficient) pairs.
    pub fn terms(&self) -> Vec<(Vec<usize>, Poly<C>)> {
        self.terms
            .iter()
            .map(|(m, p)| (mask_indices(*m), p.clone()))
            .collect()
    }

    /// Coefficient at an increasing multi-index.
    pub fn coeff_at(&self, idx: &[usize]) -> Poly<C> {
        debug_assert!(idx.windows(2).all(|w| w[0] < w[1]));
        match mask_of(idx) {
            Some((m, false)) => self.terms.get(&m).cloned().unwrap_or_else(|| Poly::zero(self.n)),
            _ => Poly::zero(self.n),
        }
    }

    fn insert(&mut self, m: Mask, p: Poly<C>) {
        if p.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(p);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&p);
                if s.is_zero() {
                    e.remove();
                } else {
                    e.insert(s);
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.n, self.k), (other.n, other.k));
        let mut out = self.clone();
        for (m, p) in &other.terms {
            out.insert(*m, p.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Form::zero(self.n, self.k);
        for (m, p) in &self.terms {
            out.terms.insert(*m, p.neg());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale_poly(&self, p: &Poly<C>) -> Self {
        let mut out = Form::zero(self.n, self.k);
        for (m, c) in &self.terms {
            out.insert(*m, c.mul(p));
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Form::zero(self.n, self.k);
        for (m, p) in &self.terms {
            out.insert(*m, p.scale(c));
        }
        out
    }

    pub fn scale_q(&self, r: &Q) -> Self {
        self.scale(&C::from_q(r))
    }

    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = Form::zero(self.n, self.k + other.k);
        for (ma, pa) in &self.terms {
            for (mb, pb) in &other.terms {
                if let Some((m, neg)) = merge_masks(*ma, *mb) {
                    let prod = pa.mul(pb);
                    out.insert(m, if neg { prod.neg() } else { prod });
                }
            }
        }
        out
    }

    /// Chart exterior derivative.
    pub fn d(&self) -> Self {
        if self.k == self.n {
            return Form::zero(self.n, self.n);
        }
        let mut out = Form::zero(self.n, self.k + 1);
        for (m, p) in &self.terms {
            for mu in 0..self.n {
                let dp = p.partial(mu);
                if dp.is_zero() {
                    continue;
                }
                if let Some((mm, neg)) = merge_masks(1 << mu, *m) {
                    out.insert(mm, if neg { dp.neg() } else { dp });
                }
            }
        }
        out
    }

    /// Interior product with the coordinate frame vector u_j.
    pub fn interior(&self, j: usize) -> Self {
        if self.k == 0 {
            return Form::zero(self.n, 0);
        }
        let mut out = Form::zero(self.n, self.k - 1);
        let bit = 1u16 << j;
        for (m, p) in &self.terms {
            if m & bit == 0 {
                continue;
            }
            let pos = (m & (bit - 1)).count_ones();
            let c = if pos % 2 == 1 { p.neg() } else { p.clone() };
            out.insert(m & !bit, c);
        }
        out
    }

    /// Iterated interior product u_I -| : i with index list I applies
    /// i_{u_{i_1}} first, then i_{u_{i_2}}, and so on.
    pub fn interior_multi(&self, idx: &[usize]) -> Self {
        let mut cur = self.clone();
        for &j in idx {
            cur = cur.interior(j);
        }
        cur
    }

    /// Interior product with a polynomial vector field V = sum_j comps[j] u_j.
    pub fn contract_vector(&self, comps: &[Poly<C>]) -> Self {
        assert_eq!(comps.len(), self.n);
        let k_out = self.k.saturating_sub(1);
        let mut out = Form::zero(self.n, k_out);
        for (j, c) in comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out = out.add(&self.interior(j).scale_poly(c));
        }
        out
    }

    /// Evaluate every coefficient at a chart point.
    pub fn eval_coeffs(&self, pt: &[Q]) -> Vec<(Vec<usize>, C)> {
        self.terms
            .iter()
            .map(|(m, p)| (mask_indices(*m), p.eval(pt)))
            .collect()
    }
}

impl<C: Coeff> fmt::Display for Form<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, p) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "[{}]", p)?;
            if *m != 0 {
                let idx: Vec<String> =
                    mask_indices(*m).iter().map(|i| (i + 1).to_string()).collect();
                write!(f, " e^{{{}}}", idx.join(","))?;
            }
        }
        Ok(())
    }
}

/// Coordinate volume form e^1 ^ ... ^ e^n.
pub fn vol<C: Coeff>(n: usize) -> Form<C> {
    let idx: Vec<usize> = (0..n).collect();
    Form::from_indices(n, &idx, Poly::one(n))
}

/// Dual basis (n-p)-form e^{(n-p)}_I = u_I -| vol.
pub fn dual_form<C: Coeff>(n: usize, idx: &[usize]) -> Form<C> {
    vol(n).interior_multi(idx)
}
