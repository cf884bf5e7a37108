//! Monomials, term orders and ring descriptors.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type Exponents = SmallVec<[u32; 8]>;

/// A monomial `x_1^{a_1} ... x_n^{a_n}` with its total degree cached.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: Exponents,
    degree: u32,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: SmallVec::from_elem(0, nvars),
            degree: 0,
        }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.exps[i] = 1;
        m.degree = 1;
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        Monomial {
            degree: exps.iter().sum(),
            exps: SmallVec::from_slice(exps),
        }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.exps[i]
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
            degree: self.degree + other.degree,
        }
    }

    pub fn pow(&self, e: u32) -> Monomial {
        Monomial {
            exps: self.exps.iter().map(|a| a * e).collect(),
            degree: self.degree * e,
        }
    }

    /// True when `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self` when the division is exact.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial {
            exps: other.exps.iter().zip(&self.exps).map(|(b, a)| b - a).collect(),
            degree: other.degree - self.degree,
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let exps: Exponents = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| *a.max(b))
            .collect();
        Monomial {
            degree: exps.iter().sum(),
            exps,
        }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(&other.exps)
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Indices of variables with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(i, _)| i)
    }

    /// Index of the single variable when the monomial is a pure power.
    pub fn pure_power_var(&self) -> Option<usize> {
        let mut found = None;
        for (i, e) in self.exps.iter().enumerate() {
            if *e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }

    /// Reorders or embeds exponents: variable `i` of `self` goes to slot
    /// `map[i]` of a monomial in `target_nvars` variables.
    pub fn remap(&self, map: &[usize], target_nvars: usize) -> Monomial {
        let mut exps: Exponents = SmallVec::from_elem(0, target_nvars);
        for (i, e) in self.exps.iter().enumerate() {
            exps[map[i]] += e;
        }
        Monomial {
            exps,
            degree: self.degree,
        }
    }

    /// All monomials of total degree `deg` in `nvars` variables, in
    /// decreasing lex order.
    pub fn all_of_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            let n = cur.len();
            if i + 1 == n {
                cur[i] = left;
                out.push(Monomial::from_exponents(cur));
                cur[i] = 0;
                return;
            }
            for e in (0..=left).rev() {
                cur[i] = e;
                rec(i + 1, left - e, cur, out);
            }
            cur[i] = 0;
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if deg == 0 {
                out.push(Monomial::one(0));
            }
            return out;
        }
        let mut cur = vec![0; nvars];
        rec(0, deg, &mut cur, &mut out);
        out
    }
}

/// Global monomial orders.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum MonomialOrder {
    /// Degree reverse lexicographic with `x_1 > x_2 > ... > x_n`.
    DegRevLex,
    /// Pure lexicographic with `x_1 > x_2 > ... > x_n`.
    Lex,
    /// The first `block` variables are eliminated: compare degrevlex on the
    /// first block, break ties by degrevlex on the rest.
    Elimination { block: usize },
    /// Local degree order: lower total degree is larger, ties by degrevlex.
    /// Not a well-order, so only usable modulo a power of the variables.
    NegDegRevLex,
}

fn degrevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for (x, y) in a.iter().zip(b).rev() {
        match x.cmp(y) {
            Ordering::Equal => continue,
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    /// Compares two monomials of the same length.
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.nvars(), b.nvars());
        match *self {
            MonomialOrder::DegRevLex => match a.degree.cmp(&b.degree) {
                Ordering::Equal => {
                    for (x, y) in a.exps.iter().zip(&b.exps).rev() {
                        match x.cmp(y) {
                            Ordering::Equal => continue,
                            o => return o.reverse(),
                        }
                    }
                    Ordering::Equal
                }
                o => o,
            },
            MonomialOrder::Lex => a.exps.cmp(&b.exps),
            MonomialOrder::NegDegRevLex => match b.degree.cmp(&a.degree) {
                Ordering::Equal => MonomialOrder::DegRevLex.compare(a, b),
                o => o,
            },
            MonomialOrder::Elimination { block } => {
                let k = block.min(a.nvars());
                match degrevlex(&a.exps[..k], &b.exps[..k]) {
                    Ordering::Equal => degrevlex(&a.exps[k..], &b.exps[k..]),
                    o => o,
                }
            }
        }
    }

    /// Like [`MonomialOrder::compare`] but rejects length mismatches.
    pub fn try_compare(&self, a: &Monomial, b: &Monomial) -> Result<Ordering> {
        if a.nvars() != b.nvars() {
            return Err(Error::RingMismatch(format!(
                "monomials in {} and {} variables",
                a.nvars(),
                b.nvars()
            )));
        }
        Ok(self.compare(a, b))
    }

    /// Whether the order refines total degree.
    pub fn is_degree_compatible(&self) -> bool {
        matches!(self, MonomialOrder::DegRevLex)
    }
}

/// Polynomial ring descriptor: variable names and the term order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Ring {
    names: Vec<String>,
    order: MonomialOrder,
}

impl Ring {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>, order: MonomialOrder) -> Arc<Ring> {
        Arc::new(Ring {
            names: names.into_iter().map(Into::into).collect(),
            order,
        })
    }

    /// `x1, ..., xn` under degrevlex.
    pub fn with_nvars(n: usize) -> Arc<Ring> {
        Ring::new((1..=n).map(|i| format!("x{i}")), MonomialOrder::DegRevLex)
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn with_order(&self, order: MonomialOrder) -> Arc<Ring> {
        Arc::new(Ring {
            names: self.names.clone(),
            order,
        })
    }

    /// A fresh variable name not clashing with existing ones.
    pub fn fresh_name(&self, base: &str) -> String {
        let mut candidate = base.to_string();
        let mut k = 0;
        while self.names.contains(&candidate) {
            k += 1;
            candidate = format!("{base}_{k}");
        }
        candidate
    }

    pub fn fmt_monomial(&self, m: &Monomial, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if m.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, e) in m.exps.iter().enumerate() {
            if *e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", self.names[i])?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn degrevlex_examples() {
        let ord = MonomialOrder::DegRevLex;
        assert_eq!(ord.compare(&m(&[2, 0]), &m(&[1, 1])), Ordering::Greater);
        assert_eq!(ord.compare(&m(&[1, 1]), &m(&[1, 1])), Ordering::Equal);
        // x*z < y^2 in degrevlex with x > y > z
        assert_eq!(ord.compare(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Ordering::Less);
    }

    #[test]
    fn lex_ignores_degree() {
        let ord = MonomialOrder::Lex;
        assert_eq!(ord.compare(&m(&[0, 5]), &m(&[1, 0])), Ordering::Less);
    }

    #[test]
    fn elimination_block_dominates() {
        let ord = MonomialOrder::Elimination { block: 1 };
        assert_eq!(ord.compare(&m(&[1, 0, 0]), &m(&[0, 7, 7])), Ordering::Greater);
        assert_eq!(ord.compare(&m(&[0, 2, 0]), &m(&[0, 1, 0])), Ordering::Greater);
    }

    #[test]
    fn length_mismatch_rejected() {
        let ord = MonomialOrder::DegRevLex;
        assert!(ord.try_compare(&m(&[1]), &m(&[1, 0])).is_err());
    }

    #[test]
    fn all_of_degree_counts() {
        assert_eq!(Monomial::all_of_degree(3, 2).len(), 6);
        assert_eq!(Monomial::all_of_degree(2, 0).len(), 1);
        assert!(Monomial::all_of_degree(3, 4).iter().all(|x| x.degree() == 4));
    }

    #[test]
    fn division_and_lcm() {
        let a = m(&[2, 1]);
        let b = m(&[1, 3]);
        assert_eq!(a.lcm(&b), m(&[2, 3]));
        assert_eq!(m(&[1, 1]).quotient_of(&a), Some(m(&[1, 0])));
        assert_eq!(b.quotient_of(&a), None);
        assert!(m(&[1, 0]).is_coprime(&m(&[0, 4])));
    }
}
