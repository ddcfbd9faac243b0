//! Kauffman-bracket evaluation of the Jones polynomial, kept independent of
//! the cube so the graded Euler characteristic of the homology can be
//! cross-checked against a skein-theoretic computation.

use super::pd::PDCode;
use super::plan::analyze;
use std::collections::BTreeMap;

/// Sparse Laurent polynomial with integer coefficients: exponent -> coeff.
pub type Laurent = BTreeMap<i64, i64>;

pub fn laurent_zero() -> Laurent {
    BTreeMap::new()
}

pub fn laurent_one() -> Laurent {
    BTreeMap::from([(0, 1)])
}

pub fn monomial(exp: i64, coeff: i64) -> Laurent {
    if coeff == 0 {
        laurent_zero()
    } else {
        BTreeMap::from([(exp, coeff)])
    }
}

pub fn laurent_add(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = a.clone();
    for (&e, &c) in b {
        let v = out.entry(e).or_insert(0);
        *v += c;
        if *v == 0 {
            out.remove(&e);
        }
    }
    out
}

pub fn laurent_mul(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = laurent_zero();
    for (&ea, &ca) in a {
        for (&eb, &cb) in b {
            let v = out.entry(ea + eb).or_insert(0);
            *v += ca * cb;
            if *v == 0 {
                out.remove(&(ea + eb));
            }
        }
    }
    out
}

pub fn laurent_pow(a: &Laurent, mut n: u32) -> Laurent {
    let mut out = laurent_one();
    let mut base = a.clone();
    while n > 0 {
        if n & 1 == 1 {
            out = laurent_mul(&out, &base);
        }
        base = laurent_mul(&base, &base);
        n >>= 1;
    }
    out
}

/// Number of circles in the state where each crossing is resolved by its
/// bit: 0 keeps the (a,b),(c,d) pairing, 1 the (a,d),(b,c) pairing.
fn state_circles(pd: &PDCode, state: usize) -> usize {
    let labels: Vec<usize> = pd.occurrences().keys().copied().collect();
    let index: BTreeMap<usize, usize> =
        labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let mut uf = crate::util::UnionFind::new(labels.len());
    for (i, x) in pd.crossings.iter().enumerate() {
        let [a, b, c, d] = x.edges;
        let pairs = if state >> i & 1 == 0 {
            [(a, b), (c, d)]
        } else {
            [(a, d), (b, c)]
        };
        for (x, y) in pairs {
            uf.union(index[&x], index[&y]);
        }
    }
    uf.class_count() + pd.free_loops
}

/// The unnormalized Jones polynomial in the variable `q`, computed from the
/// Kauffman bracket state sum and normalized by the writhe. Satisfies
/// `J(unknot) = q + 1/q` and equals the graded Euler characteristic of the
/// bigraded homology of the link.
pub fn jones_unnormalized(pd: &PDCode) -> Result<Laurent, super::plan::PlanError> {
    if pd.crossings.is_empty() {
        // delta^(free loops), delta = q + q^{-1}, with the empty link at 1
        let delta = laurent_add(&monomial(1, 1), &monomial(-1, 1));
        return Ok(laurent_pow(&delta, pd.free_loops as u32));
    }
    let analysis = analyze(pd)?;
    let writhe = analysis.n_plus as i64 - analysis.n_minus as i64;
    let n = pd.crossings.len();
    // bracket in A: sum over states of A^(a-b) * (-A^2 - A^-2)^(circles-1)
    let delta_a = laurent_add(&monomial(2, -1), &monomial(-2, -1));
    let mut bracket = laurent_zero();
    for state in 0..1usize << n {
        let b_count = state.count_ones() as i64;
        let a_count = n as i64 - b_count;
        let circles = state_circles(pd, state) as u32;
        let term = laurent_mul(
            &monomial(a_count - b_count, 1),
            &laurent_pow(&delta_a, circles - 1),
        );
        bracket = laurent_add(&bracket, &term);
    }
    // f = (-A^3)^(-w) * bracket
    let twist = monomial(-3 * writhe, if writhe.rem_euclid(2) == 0 { 1 } else { -1 });
    let f = laurent_mul(&twist, &bracket);
    // substitute q = A^(-2) and multiply by q + 1/q
    let mut v = laurent_zero();
    for (&e, &c) in &f {
        assert!(e % 2 == 0, "writhe-normalized bracket has even exponents");
        v = laurent_add(&v, &monomial(-e / 2, c));
    }
    let delta_q = laurent_add(&monomial(1, 1), &monomial(-1, 1));
    Ok(laurent_mul(&delta_q, &v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknot_variants() {
        let delta = laurent_add(&monomial(1, 1), &monomial(-1, 1));
        for text in ["PD[O]", "PD[X(1,1,2,2)]"] {
            let pd = PDCode::parse(text).unwrap();
            assert_eq!(jones_unnormalized(&pd).unwrap(), delta, "{text}");
        }
    }

    #[test]
    fn right_trefoil_jones() {
        let pd = PDCode::parse("PD[X(1,5,2,4),X(3,1,4,6),X(5,3,6,2)]").unwrap();
        // q + q^3 + q^5 - q^9
        let expected = BTreeMap::from([(1, 1), (3, 1), (5, 1), (9, -1)]);
        assert_eq!(jones_unnormalized(&pd).unwrap(), expected);
    }

    #[test]
    fn euler_characteristic_matches_oracle() {
        for text in [
            "PD[X(1,5,2,4),X(3,1,4,6),X(5,3,6,2)]",
            "PD[X(4,2,5,1),X(8,6,1,5),X(6,3,7,4),X(2,7,3,8)]",
        ] {
            let pd = PDCode::parse(text).unwrap();
            let table = super::super::cube::cube_oracle(&pd).unwrap();
            let euler: Laurent = table
                .graded_euler()
                .into_iter()
                .filter(|&(_, c)| c != 0)
                .collect();
            assert_eq!(euler, jones_unnormalized(&pd).unwrap(), "{text}");
        }
    }
}
