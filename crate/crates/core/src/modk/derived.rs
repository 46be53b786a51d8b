use serde::{Deserialize, Serialize};

use crate::check::check_membership;
use crate::connectivity::edge_connectivity;
use crate::error::{hypothesis, precondition, Error, Hypotheses, Result};
use crate::graph::{Bipartition, Factor, IntFunc, Multigraph, ResidueMap};

use super::bipartite::bipartite_f_factor;
use super::general::general_f_factor;
use super::hightree::high_tree_f_factor;
use super::{assert_check, bipartition_of};

/// Degree targets near `d/2`, each read off one of the engines.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HalfVariant {
    /// Bipartite, `k` odd: `d_H ∈ {d/2 - k/2, d/2, d/2 + k/2}`.
    OddHalf,
    /// Bipartite, even degrees, even order: `d_H ∈ {d/2 - k, d/2 + k}`.
    EulerianPmK,
    /// Bipartite with one class all even: `d_H = d/2` there, and on the other
    /// class `d_H ≡ f` with `|d_H - d/2| < k`. Values of `f` on the even class
    /// are ignored.
    Merker { f: ResidueMap },
    /// `d_H ∈ {f, f + k}` when `f <= d/2 <= f + k - 1/2`, from edge-connectivity.
    FOrFPlusKEdge { f: IntFunc },
    /// `d_H ∈ {f, f + k}` when `f <= d/2 <= f + k`, from tree-connectivity.
    FOrFPlusKTree { f: IntFunc },
}

fn require_edge_connected(g: &Multigraph, need: usize) -> Result<()> {
    if need == 0 || g.vertex_count() < 2 {
        return Ok(());
    }
    let lambda = edge_connectivity(g)?;
    if lambda < need {
        return hypothesis(format!("graph is {lambda}-edge-connected, not {need}"));
    }
    Ok(())
}

fn positive(f: &IntFunc, g: &Multigraph) -> Result<()> {
    if f.len() != g.vertex_count() {
        return precondition("f has the wrong length");
    }
    match f.0.iter().position(|&x| x < 1) {
        Some(v) => precondition(format!("f({v}) = {} is not positive", f.get(v))),
        None => Ok(()),
    }
}

pub fn derived_half_factors(g: &Multigraph, k: usize, variant: &HalfVariant, hyp: Hypotheses) -> Result<Factor> {
    if k == 0 {
        return Err(Error::ZeroModulus);
    }
    let d: Vec<i64> = g.degrees().into_iter().map(|x| x as i64).collect();
    let ki = k as i64;
    match variant {
        HalfVariant::OddHalf => {
            if k % 2 == 0 {
                return precondition("k must be odd");
            }
            bipartition_of(g)?;
            let vals: Vec<i64> = d.iter().map(|&x| if x % 2 == 0 { x / 2 } else { (x + ki) / 2 }).collect();
            let f = ResidueMap::new(k, &vals)?;
            let h = bipartite_f_factor(g, &f, None, hyp)?;
            assert_check(
                "odd-half",
                check_membership(g, &h, |_, dg, dh| [dg - ki, dg, dg + ki].contains(&(2 * dh))),
            );
            Ok(h)
        }
        HalfVariant::EulerianPmK => {
            bipartition_of(g)?;
            if !g.is_even() {
                return precondition("graph has a vertex of odd degree");
            }
            if g.vertex_count() % 2 == 1 {
                return precondition("graph has odd order");
            }
            if hyp.verify() {
                require_edge_connected(g, 6 * k - 2)?;
            }
            let f = ResidueMap::new(2 * k, &d.iter().map(|&x| x / 2 + ki).collect::<Vec<_>>())?;
            let h = bipartite_f_factor(g, &f, None, Hypotheses::Assume)?;
            assert_check(
                "eulerian-pm-k",
                check_membership(g, &h, |_, dg, dh| dh == dg / 2 - ki || dh == dg / 2 + ki),
            );
            Ok(h)
        }
        HalfVariant::Merker { f } => {
            f.check_len(g)?;
            if f.modulus() != k {
                return Err(Error::ModulusMismatch {
                    expected: k,
                    got: f.modulus(),
                });
            }
            let mut b = bipartition_of(g)?;
            let all_even = |b: &Bipartition| (0..d.len()).all(|v| !b.in_x(v) || d[v] % 2 == 0);
            if !all_even(&b) {
                b = b.swapped();
                if !all_even(&b) {
                    return precondition("neither class has only even degrees");
                }
            }
            let y_sum: i64 = (0..d.len()).filter(|&v| !b.in_x(v)).map(|v| f.get(v) as i64).sum();
            let half = g.edge_count() as i64 / 2;
            if g.edge_count() % 2 == 1 || (y_sum - half).rem_euclid(ki) != 0 {
                return precondition(format!("the sum of f over Y is {y_sum}, not |E|/2 = {half} mod {k}"));
            }
            let vals: Vec<i64> = (0..d.len())
                .map(|v| if b.in_x(v) { d[v] / 2 } else { f.get(v) as i64 })
                .collect();
            let full = ResidueMap::new(k, &vals)?;
            let h = bipartite_f_factor(g, &full, None, hyp)?;
            assert_check(
                "merker",
                check_membership(g, &h, |v, dg, dh| {
                    if b.in_x(v) {
                        2 * dh == dg
                    } else {
                        (2 * dh - dg).abs() < 2 * ki && f.matches(v, dh)
                    }
                }),
            );
            Ok(h)
        }
        HalfVariant::FOrFPlusKEdge { f } => {
            positive(f, g)?;
            if let Some(v) = (0..d.len()).find(|&v| !(2 * f.get(v) <= d[v] && d[v] <= 2 * f.get(v) + 2 * ki - 1)) {
                return precondition(format!("f({v}) = {} violates f <= d/2 <= f + k - 1/2 (d = {})", f.get(v), d[v]));
            }
            if hyp.verify() {
                require_edge_connected(g, (6 * k).saturating_sub(7))?;
            }
            let h = general_f_factor(g, &ResidueMap::new(k, &f.0)?, hyp)?;
            assert_check(
                "f-or-f-plus-k-edge",
                check_membership(g, &h, |v, _, dh| dh == f.get(v) || dh == f.get(v) + ki),
            );
            Ok(h)
        }
        HalfVariant::FOrFPlusKTree { f } => {
            positive(f, g)?;
            if let Some(v) = (0..d.len()).find(|&v| !(2 * f.get(v) <= d[v] && d[v] <= 2 * f.get(v) + 2 * ki)) {
                return precondition(format!("f({v}) = {} violates f <= d/2 <= f + k (d = {})", f.get(v), d[v]));
            }
            if g.vertex_count() == 0 {
                return Ok(Factor::empty(g));
            }
            // the looser bound at z only escapes {f, f+k} when d(z) = 2f(z) + 2k
            let h = match (0..d.len()).find(|&v| d[v] != 2 * f.get(v) + 2 * ki) {
                Some(z) => high_tree_f_factor(g, &ResidueMap::new(k, &f.0)?, z, hyp)?,
                None => {
                    // d_H ∈ {f, f+k} iff d - d_H ∈ {d/2, d/2 + k}
                    let fc: Vec<i64> = d.iter().map(|&x| x / 2).collect();
                    high_tree_f_factor(g, &ResidueMap::new(k, &fc)?, 0, hyp)?.complement()
                }
            };
            assert_check(
                "f-or-f-plus-k-tree",
                check_membership(g, &h, |v, _, dh| dh == f.get(v) || dh == f.get(v) + ki),
            );
            Ok(h)
        }
    }
}

/// `d_H ∈ {d/2 - 2, d/2 + 2}` on a non-bipartite 18-edge-connected graph
/// with even degrees and an even number of edges.
pub fn mod2_18_edge_eulerian(g: &Multigraph, hyp: Hypotheses) -> Result<Factor> {
    if !g.is_even() {
        return precondition("graph has a vertex of odd degree");
    }
    if hyp.verify() {
        if g.is_bipartite() {
            return hypothesis("graph is bipartite");
        }
        if g.edge_count() % 2 == 1 {
            return hypothesis(format!("graph has {} edges, an odd number", g.edge_count()));
        }
        require_edge_connected(g, 18)?;
    }
    let d: Vec<i64> = g.degrees().into_iter().map(|x| x as i64).collect();
    let f = ResidueMap::new(4, &d.iter().map(|&x| x / 2 + 2).collect::<Vec<_>>())?;
    let h = general_f_factor(g, &f, hyp)?;
    assert_check(
        "mod2_18_edge_eulerian",
        check_membership(g, &h, |_, dg, dh| dh == dg / 2 - 2 || dh == dg / 2 + 2),
    );
    Ok(h)
}
