//! Hilbert series of monomial ideals and dimension counts derived from them.

use crate::monomial::Monomial;

/// `HS(t) = numerator(t) / (1 - t)^n` for `k[x_1..x_n] / M`, any `n` at
/// least the number of variables.
pub fn hilbert_numerator(gens: &[Monomial]) -> Vec<i64> {
    let gens = minimalize(gens.to_vec());
    numerator_rec(&gens)
}

/// Drops generators divisible by another one.
pub fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(|m| m.degree());
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::with_capacity(gens.len());
    for g in gens {
        if !out.iter().any(|h| h.divides(&g)) {
            out.push(g);
        }
    }
    out
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add_shifted(a: &mut Vec<i64>, b: &[i64], shift: usize) {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, 0);
    }
    for (j, y) in b.iter().enumerate() {
        a[j + shift] += y;
    }
}

fn trim(mut v: Vec<i64>) -> Vec<i64> {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    v
}

fn numerator_rec(gens: &[Monomial]) -> Vec<i64> {
    if gens.is_empty() {
        return vec![1];
    }
    if gens.iter().any(|g| g.is_one()) {
        return vec![0];
    }
    let pairwise_coprime = (0..gens.len())
        .all(|i| (i + 1..gens.len()).all(|j| gens[i].is_coprime(&gens[j])));
    if pairwise_coprime {
        let mut acc = vec![1i64];
        for g in gens.iter() {
            let mut f = vec![0i64; g.degree() as usize + 1];
            f[0] = 1;
            f[g.degree() as usize] -= 1;
            acc = poly_mul(&acc, &f);
        }
        return trim(acc);
    }
    // pivot on the variable occurring in the most generators
    let n = gens[0].nvars();
    let mut counts = vec![0usize; n];
    for g in gens.iter() {
        for v in g.support() {
            counts[v] += 1;
        }
    }
    let var = (0..n).max_by_key(|v| (counts[*v], std::cmp::Reverse(*v))).unwrap();
    let e = gens
        .iter()
        .map(|g| g.exponent(var))
        .filter(|e| *e > 0)
        .min()
        .unwrap();
    let mut pexp = vec![0u32; n];
    pexp[var] = e;
    let pivot = Monomial::from_exponents(&pexp);

    let mut plus: Vec<Monomial> = gens.iter().filter(|g| !pivot.divides(g)).cloned().collect();
    plus.push(pivot.clone());
    let plus = minimalize(plus);

    let colon: Vec<Monomial> = gens
        .iter()
        .map(|g| {
            let mut ex = g.exponents().to_vec();
            ex[var] = ex[var].saturating_sub(e);
            Monomial::from_exponents(&ex)
        })
        .collect();
    let colon = minimalize(colon);

    let mut a = numerator_rec(&plus);
    let b = numerator_rec(&colon);
    poly_add_shifted(&mut a, &b, e as usize);
    trim(a)
}

/// Hilbert data of `k[x_1..x_n] / M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertData {
    pub nvars: usize,
    /// `HS(t) = numerator(t) / (1 - t)^nvars`.
    pub numerator: Vec<i64>,
    /// `HS(t) = reduced(t) / (1 - t)^dimension` with `reduced(1) != 0`.
    pub reduced: Vec<i64>,
    pub dimension: usize,
    pub multiplicity: i64,
}

/// Divides by `(1 - t)`; the caller guarantees `p(1) = 0`.
fn divide_one_minus_t(p: &[i64]) -> Vec<i64> {
    // p = (1 - t) q  =>  q_k = sum_{j <= k} p_j
    let mut q = Vec::with_capacity(p.len().saturating_sub(1).max(1));
    let mut acc = 0i64;
    for c in &p[..p.len() - 1] {
        acc += c;
        q.push(acc);
    }
    if q.is_empty() {
        q.push(0);
    }
    trim(q)
}

impl HilbertData {
    /// `None` for the unit ideal, whose quotient is zero.
    pub fn from_monomials(nvars: usize, gens: &[Monomial]) -> Option<Self> {
        let numerator = hilbert_numerator(gens);
        if numerator.iter().all(|c| *c == 0) {
            return None;
        }
        let mut reduced = numerator.clone();
        let mut dimension = nvars;
        while reduced.iter().sum::<i64>() == 0 {
            reduced = divide_one_minus_t(&reduced);
            dimension -= 1;
        }
        let multiplicity = reduced.iter().sum();
        Some(HilbertData {
            nvars,
            numerator,
            reduced,
            dimension,
            multiplicity,
        })
    }

    /// Coefficient of `t^deg` in the series.
    pub fn hilbert_function(&self, deg: u32) -> i128 {
        // coefficient of t^m in 1/(1-t)^d is C(m + d - 1, d - 1)
        let d = self.dimension as i128;
        let mut total = 0i128;
        for (j, c) in self.reduced.iter().enumerate() {
            if (j as u32) > deg {
                break;
            }
            let m = (deg as i128) - j as i128;
            let coeff = if d == 0 {
                if m == 0 { 1 } else { 0 }
            } else {
                binomial(m + d - 1, d - 1)
            };
            total += *c as i128 * coeff;
        }
        total
    }

    /// `sum_{j < deg} H(j)`, the length of the quotient by `(x)^deg`.
    pub fn cumulative(&self, deg: u32) -> i128 {
        (0..deg).map(|j| self.hilbert_function(j)).sum()
    }
}

pub(crate) fn binomial(n: i128, k: i128) -> i128 {
    if k < 0 || n < k {
        return 0;
    }
    let k = k.min(n - k);
    let mut r = 1i128;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Minimum number of variables meeting every support, by branch and bound.
pub fn min_hitting_set(supports: &[u64]) -> usize {
    fn rec(supports: &[u64], chosen: u64, size: usize, best: &mut usize) {
        if size >= *best {
            return;
        }
        match supports.iter().find(|s| **s & chosen == 0) {
            None => *best = size,
            Some(s) => {
                let mut bits = *s;
                while bits != 0 {
                    let v = bits.trailing_zeros();
                    bits &= bits - 1;
                    rec(supports, chosen | (1u64 << v), size + 1, best);
                }
            }
        }
    }
    let mut best = usize::MAX;
    rec(supports, 0, 0, &mut best);
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn principal_monomial() {
        // k[x,y]/(x^2): (1 - t^2)/(1 - t)^2 = (1 + t)/(1 - t)
        let h = HilbertData::from_monomials(2, &[m(&[2, 0])]).unwrap();
        assert_eq!(h.dimension, 1);
        assert_eq!(h.multiplicity, 2);
        assert_eq!(h.hilbert_function(5), 2);
    }

    #[test]
    fn artinian_colength() {
        // (x^2, xy, y^3): standard monomials 1, x, y, y^2
        let h = HilbertData::from_monomials(2, &[m(&[2, 0]), m(&[1, 1]), m(&[0, 3])]).unwrap();
        assert_eq!(h.dimension, 0);
        assert_eq!(h.multiplicity, 4);
        assert_eq!(h.cumulative(10), 4);
    }

    #[test]
    fn unit_and_zero_ideals() {
        assert!(HilbertData::from_monomials(2, &[m(&[0, 0])]).is_none());
        let h = HilbertData::from_monomials(3, &[]).unwrap();
        assert_eq!((h.dimension, h.multiplicity), (3, 1));
        assert_eq!(h.hilbert_function(2), 6);
    }

    #[test]
    fn hitting_sets() {
        assert_eq!(min_hitting_set(&[]), 0);
        assert_eq!(min_hitting_set(&[0b011, 0b110]), 1);
        assert_eq!(min_hitting_set(&[0b001, 0b010, 0b100]), 3);
    }
}
