use rayon::prelude::*;
use serde::Serialize;

use super::Graph;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SrgParams {
    pub v: usize,
    pub k: usize,
    pub lambda: usize,
    pub mu: usize,
}

impl SrgParams {
    pub fn new(v: usize, k: usize, lambda: usize, mu: usize) -> Self {
        SrgParams { v, k, lambda, mu }
    }

    /// `k(k - lambda - 1) = (v - k - 1) mu`.
    pub fn is_feasible(&self) -> bool {
        self.k * (self.k - self.lambda - 1) == (self.v - self.k - 1) * self.mu
    }

    /// Parameters of the complementary graph.
    pub fn complement(&self) -> SrgParams {
        let (v, k, l, m) = (self.v, self.k, self.lambda, self.mu);
        SrgParams { v, k: v - k - 1, lambda: v + m - 2 * k - 2, mu: v + l - 2 * k }
    }

    /// The closed form for Sp(2e,q).
    pub fn symplectic(e: u32, q: usize) -> SrgParams {
        let v = (q.pow(2 * e) - 1) / (q - 1);
        let k = q * (q.pow(2 * e - 2) - 1) / (q - 1);
        let lambda = q * q * (q.pow(2 * e - 4) - 1) / (q - 1) + q - 1;
        SrgParams { v, k, lambda, mu: k / q }
    }
}

/// Eigenvalue data of a primitive strongly regular graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumReport {
    pub k: i64,
    pub r: i64,
    pub s: i64,
    pub delta: i64,
    pub m_r: i64,
    pub m_s: i64,
    /// Rows `(multiplicity, eigenvalue of G, eigenvalue of the complement)`.
    pub modified_matrix: [[i64; 3]; 3],
}

/// Certifies strong regularity by counting common neighbours of every pair.
/// On failure the witness is the lexicographically first offending pair.
pub fn verify_srg(g: &Graph) -> Result<SrgParams> {
    let n = g.n();
    if n < 2 {
        return Err(Error::cert("srg", "fewer than two vertices"));
    }
    let k = g.degree(0);
    if let Some(v) = (0..n).find(|&v| g.degree(v) != k) {
        return Err(Error::cert("regularity", format!("deg(0)={k}, deg({v})={}", g.degree(v))));
    }
    // lambda/mu candidates from the first adjacent and first non-adjacent pair
    let lambda = (1..n).find(|&j| g.has_edge(0, j)).map(|j| g.common_neighbors(0, j));
    let mu = (1..n).find(|&j| !g.has_edge(0, j)).map(|j| g.common_neighbors(0, j));
    let bad = (0..n)
        .into_par_iter()
        .filter_map(|i| {
            (i + 1..n)
                .find(|&j| {
                    let want = if g.has_edge(i, j) { lambda } else { mu };
                    Some(g.common_neighbors(i, j)) != want
                })
                .map(|j| (i, j))
        })
        .min();
    if let Some((i, j)) = bad {
        let adj = g.has_edge(i, j);
        return Err(Error::cert(
            if adj { "lambda" } else { "mu" },
            format!(
                "pair ({i},{j}) adjacent={adj} has {} common neighbours, expected {:?}",
                g.common_neighbors(i, j),
                if adj { lambda } else { mu }
            ),
        ));
    }
    Ok(SrgParams { v: n, k, lambda: lambda.unwrap_or(0), mu: mu.unwrap_or(0) })
}

fn isqrt(x: i64) -> Option<i64> {
    if x < 0 {
        return None;
    }
    let r = (x as f64).sqrt() as i64;
    (r.saturating_sub(1)..=r + 1).find(|&c| c >= 0 && c * c == x)
}

pub fn srg_spectrum(p: &SrgParams) -> Result<SpectrumReport> {
    let (v, k, l, m) = (p.v as i64, p.k as i64, p.lambda as i64, p.mu as i64);
    if m == 0 || m == k {
        return Err(Error::Domain(format!("imprimitive parameters {p:?}")));
    }
    let d2 = (l - m) * (l - m) + 4 * (k - m);
    let delta = isqrt(d2)
        .ok_or_else(|| Error::Unsupported(format!("irrational eigenvalues (Delta^2 = {d2})")))?;
    if (l - m + delta) % 2 != 0 {
        return Err(Error::Unsupported("half-integral eigenvalues".into()));
    }
    let r = (l - m + delta) / 2;
    let s = (l - m - delta) / 2;
    let num_r = -((v - 1) * s + k);
    let num_s = (v - 1) * r + k;
    if num_r % (r - s) != 0 || num_s % (r - s) != 0 {
        return Err(Error::Internal(format!("non-integral multiplicities for {p:?}")));
    }
    let m_r = num_r / (r - s);
    let m_s = num_s / (r - s);
    if 1 + m_r + m_s != v || k + m_r * r + m_s * s != 0 {
        return Err(Error::Internal("trace identities fail".into()));
    }
    Ok(SpectrumReport {
        k,
        r,
        s,
        delta,
        m_r,
        m_s,
        modified_matrix: [[1, k, v - 1 - k], [m_r, r, -1 - r], [m_s, s, -1 - s]],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn petersen() -> Graph {
        // Kneser graph K(5,2)
        let subsets: Vec<(usize, usize)> =
            (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect();
        Graph::from_fn(10, |i, j| {
            let (a, b) = subsets[i];
            let (c, d) = subsets[j];
            a != c && a != d && b != c && b != d
        })
    }

    #[test]
    fn petersen_is_srg() {
        let p = verify_srg(&petersen()).unwrap();
        assert_eq!(p, SrgParams::new(10, 3, 0, 1));
        let sp = srg_spectrum(&p).unwrap();
        assert_eq!((sp.r, sp.s, sp.m_r, sp.m_s), (1, -2, 5, 4));
        assert_eq!(verify_srg(&petersen().complement()).unwrap(), p.complement());
    }

    #[test]
    fn non_srg_names_a_pair() {
        let path = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]);
        match verify_srg(&path) {
            Err(Error::Certification { check, .. }) => assert_eq!(check, "regularity"),
            other => panic!("{other:?}"),
        }
        // 6-cycle: regular, but non-adjacent pairs have 1 or 0 common neighbours
        let c6 = Graph::from_edges(6, (0..6).map(|i| (i, (i + 1) % 6)));
        match verify_srg(&c6) {
            Err(Error::Certification { check, witness }) => {
                assert_eq!(check, "mu");
                assert!(witness.contains("(0,3)"), "{witness}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn spectrum_examples() {
        let s = srg_spectrum(&SrgParams::new(40, 12, 2, 4)).unwrap();
        assert_eq!((s.r, s.s, s.m_r, s.m_s), (2, -4, 24, 15));
        let s = srg_spectrum(&SrgParams::new(156, 30, 4, 6)).unwrap();
        assert_eq!((s.r, s.s), (4, -6));
        // K_{4x10}: complete multipartite, mu = k
        assert!(srg_spectrum(&SrgParams::new(40, 30, 20, 30)).is_err());
        // pentagon: conference graph with irrational eigenvalues
        assert!(matches!(srg_spectrum(&SrgParams::new(5, 2, 0, 1)), Err(Error::Unsupported(_))));
    }

    #[test]
    fn closed_forms() {
        assert_eq!(SrgParams::symplectic(2, 3), SrgParams::new(40, 12, 2, 4));
        assert_eq!(SrgParams::symplectic(2, 7), SrgParams::new(400, 56, 6, 8));
        assert_eq!(SrgParams::symplectic(3, 3), SrgParams::new(364, 120, 38, 40));
        assert!(SrgParams::symplectic(3, 3).is_feasible());
    }
}
