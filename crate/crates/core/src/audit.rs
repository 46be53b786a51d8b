//! Hypothesis-to-conclusion audits.
//!
//! An audit checks a theorem's hypotheses on an instance clause by clause,
//! runs the engine, and re-checks the conclusion with [`crate::check`] and,
//! where the instance is small enough, [`crate::oracle`]. The report names
//! the first clause that failed.
//!
//! | id | hypotheses | conclusion |
//! |---|---|---|
//! | `bipartite-factor` | bipartite, `f` compatible, `(3k-3)`-edge-connected | `f`-factor, `floor(d/2)-(k-1) <= d_H <= ceil(d/2)+(k-1)` |
//! | `max-bipartite-factor` | `2m`-tree-connected | bipartite `H`, `d_H(A) >= ceil(d(A)/2)`, `H` is `m`-tree-connected |
//! | `general-factor` | loopless, max-cut part `(3k-3)`-edge-connected, `f` compatible with it | `f`-factor, `floor(d/2)-(k-1) <= d_H <= floor(d/2)+k` |
//! | `high-tree-factor` | loopless, `(6k-2)`-tree-connected, `(k-1) Σf` even | `f`-factor in the half window, one vertex below it only in the exceptional case |
//! | `eulerian-half` | even degrees, edges reachable from `z` | `d_H = d/2` off `z`, `d/2 + (|E| mod 2)` at `z` |
//! | `regular-factor` | `(4k-1)`-edge-connected, essentially `(6k-7)` (bipartite: `2k`, `3k-3`) | bipartite factor, degrees positive multiples of `k` |
//! | `afk-subgraph` | `q = k` a prime power, loopless, `|E| > (q-1) n` | non-empty subgraph, degrees `≡ 0 (mod q)` |
//! | `konig-scale` | `q`-regular bipartite (`q = m`), `k <= q` | `k`-regular factor |

use std::panic::{catch_unwind, AssertUnwindSafe};

use serde::{Deserialize, Serialize};

use crate::check::{check_bipartite, check_modk_regular_factor, check_modk_regular_subgraph, check_residues, check_window, half_window, Check};
use crate::compat::compatible_wrt;
use crate::connectivity::{edge_connectivity, essential_edge_connectivity, tree_pack, ESSENTIAL_MAX_VERTICES};
use crate::error::{Error, Hypotheses, Result};
use crate::extract::max_bipartite_factor;
use crate::gen;
use crate::graph::{Bipartition, Factor, IntFunc, Multigraph, ResidueMap, VertexId};
use crate::maxcut::{CutMode, EXACT_MAX_VERTICES};
use crate::modk;
use crate::oracle;
use crate::par::{self, Exec};
use crate::regular::{self, RegularRoute};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    BipartiteFactor,
    MaxBipartiteFactor,
    GeneralFactor,
    HighTreeFactor,
    EulerianHalf,
    RegularFactor,
    AfkSubgraph,
    KonigScale,
}

impl Theorem {
    pub const ALL: [Theorem; 8] = [
        Theorem::BipartiteFactor,
        Theorem::MaxBipartiteFactor,
        Theorem::GeneralFactor,
        Theorem::HighTreeFactor,
        Theorem::EulerianHalf,
        Theorem::RegularFactor,
        Theorem::AfkSubgraph,
        Theorem::KonigScale,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Theorem::BipartiteFactor => "bipartite-factor",
            Theorem::MaxBipartiteFactor => "max-bipartite-factor",
            Theorem::GeneralFactor => "general-factor",
            Theorem::HighTreeFactor => "high-tree-factor",
            Theorem::EulerianHalf => "eulerian-half",
            Theorem::RegularFactor => "regular-factor",
            Theorem::AfkSubgraph => "afk-subgraph",
            Theorem::KonigScale => "konig-scale",
        }
    }

    pub fn from_id(id: &str) -> Option<Theorem> {
        Theorem::ALL.into_iter().find(|t| t.id() == id)
    }
}

/// A graph plus the parameters a theorem may need: `f` defaults to `≡ 0`,
/// `m` is the tree count (`max-bipartite-factor`) or `q` (`konig-scale`),
/// `z` the special vertex (`eulerian-half`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditInstance {
    pub graph: Multigraph,
    pub k: usize,
    pub f: Option<ResidueMap>,
    pub m: Option<usize>,
    pub z: Option<VertexId>,
}

impl AuditInstance {
    pub fn new(graph: Multigraph, k: usize) -> Self {
        AuditInstance {
            graph,
            k,
            f: None,
            m: None,
            z: None,
        }
    }

    fn f(&self) -> Result<ResidueMap> {
        match &self.f {
            Some(f) => Ok(f.clone()),
            None => ResidueMap::constant(self.k, self.graph.vertex_count(), 0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub clause: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    HypothesisFail,
    ConclusionFail,
    EngineError,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub theorem: Theorem,
    pub outcome: Outcome,
    pub failing_clause: Option<String>,
    pub hypotheses: Vec<Clause>,
    pub conclusions: Vec<Clause>,
    pub factor_edges: Option<Vec<usize>>,
    pub degrees: Option<Vec<usize>>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }
}

fn clause(name: &str, r: Check) -> Clause {
    Clause {
        clause: name.to_string(),
        holds: r.is_ok(),
        detail: r.err().unwrap_or_default(),
    }
}

fn at_least(what: &str, got: usize, need: usize) -> Check {
    if got >= need {
        Ok(())
    } else {
        Err(format!("{what} is {got}, needs {need}"))
    }
}

fn lambda(g: &Multigraph) -> usize {
    if g.vertex_count() < 2 {
        usize::MAX
    } else {
        edge_connectivity(g).unwrap_or(0)
    }
}

fn tree_connected(g: &Multigraph, m: usize) -> Check {
    if tree_pack(g, m).is_packed() {
        Ok(())
    } else {
        Err(format!("no {m} edge-disjoint spanning trees"))
    }
}

fn loopless(g: &Multigraph) -> Clause {
    clause(
        "loopless",
        if g.is_loopless() {
            Ok(())
        } else {
            Err(format!("{} loops", g.loop_count()))
        },
    )
}

fn exact_cut(g: &Multigraph) -> Result<Bipartition> {
    if g.vertex_count() > EXACT_MAX_VERTICES {
        return Err(Error::TooLarge {
            what: "vertex count for an exact maximum cut",
            limit: EXACT_MAX_VERTICES,
            got: g.vertex_count(),
        });
    }
    Ok(max_bipartite_factor(g, CutMode::Exact)?.bipartition)
}

fn compatible_clause(g: &Multigraph, f: &ResidueMap, b: &Bipartition) -> Clause {
    clause(
        "compatibility",
        match compatible_wrt(g, f, b) {
            Ok(Some(_)) => Ok(()),
            Ok(None) => Err(format!("no correction for X = {:?}", b.x().as_slice())),
            Err(e) => Err(e.to_string()),
        },
    )
}

/// What an engine produced, before the conclusion clauses are applied.
enum Produced {
    Factor(Factor),
    Special(Factor, Option<VertexId>),
    Nothing(String),
}

fn hypotheses(inst: &AuditInstance, t: Theorem) -> Result<Vec<Clause>> {
    let g = &inst.graph;
    let k = inst.k;
    let mut out = Vec::new();
    match t {
        Theorem::BipartiteFactor => {
            let f = inst.f()?;
            match g.two_coloring() {
                Some(c) => {
                    out.push(clause("bipartite", Ok(())));
                    out.push(compatible_clause(g, &f, &Bipartition::from_x_mask(c)));
                    out.push(clause("edge-connectivity", at_least("λ(G)", lambda(g), 3 * k - 3)));
                }
                None => out.push(clause("bipartite", Err("odd cycle".into()))),
            }
        }
        Theorem::MaxBipartiteFactor => {
            let m = inst.m.unwrap_or(1);
            out.push(clause("tree-connectivity", tree_connected(g, 2 * m)));
        }
        Theorem::GeneralFactor => {
            let f = inst.f()?;
            out.push(loopless(g));
            let b = exact_cut(g)?;
            let (cross, _) = b.crossing(g).graph(g);
            out.push(clause("cut-edge-connectivity", at_least("λ(G[X,Y])", lambda(&cross), 3 * k - 3)));
            out.push(compatible_clause(g, &f, &b));
        }
        Theorem::HighTreeFactor => {
            let f = inst.f()?;
            out.push(loopless(g));
            out.push(clause("tree-connectivity", tree_connected(g, 6 * k - 2)));
            out.push(clause(
                "parity",
                if ((k - 1) * f.total()) % 2 == 0 {
                    Ok(())
                } else {
                    Err("(k-1) Σf is odd".into())
                },
            ));
        }
        Theorem::EulerianHalf => {
            let z = inst.z.unwrap_or(0);
            g.check_vertex(z)?;
            out.push(clause(
                "even",
                match g.degrees().iter().position(|d| d % 2 == 1) {
                    Some(v) => Err(format!("d({v}) is odd")),
                    None => Ok(()),
                },
            ));
            let (comp, _) = g.components();
            out.push(clause(
                "connected-edges",
                match g.edges().iter().find(|&&(u, _)| comp[u] != comp[z]) {
                    Some(&(u, v)) => Err(format!("edge {u}-{v} is not reachable from z = {z}")),
                    None => Ok(()),
                },
            ));
        }
        Theorem::RegularFactor => {
            out.push(loopless(g));
            let (l, e) = if g.is_bipartite() {
                (2 * k, 3 * k - 3)
            } else {
                (4 * k - 1, (6 * k).saturating_sub(7))
            };
            out.push(clause("edge-connectivity", at_least("λ(G)", lambda(g), l)));
            let ess = if g.vertex_count() < 4 || e == 0 {
                Ok(())
            } else if g.vertex_count() > ESSENTIAL_MAX_VERTICES {
                Err("too many vertices to check".to_string())
            } else {
                at_least("essential λ(G)", essential_edge_connectivity(g)?, e)
            };
            out.push(clause("essential-edge-connectivity", ess));
        }
        Theorem::AfkSubgraph => {
            out.push(loopless(g));
            out.push(clause(
                "prime-power",
                if regular::is_prime_power(k) {
                    Ok(())
                } else {
                    Err(format!("{k} is not a prime power"))
                },
            ));
            let bound = k.saturating_sub(1) * g.vertex_count();
            out.push(clause("edge-count", at_least("|E|", g.edge_count(), bound + 1)));
        }
        Theorem::KonigScale => {
            let q = inst.m.unwrap_or(k);
            out.push(clause(
                "bipartite",
                if g.is_bipartite() {
                    Ok(())
                } else {
                    Err("odd cycle".into())
                },
            ));
            out.push(clause(
                "regular",
                match g.degrees().iter().position(|&d| d != q) {
                    Some(v) => Err(format!("d({v}) = {} is not q = {q}", g.degrees()[v])),
                    None => Ok(()),
                },
            ));
            out.push(clause("k-at-most-q", at_least("q", q, k)));
        }
    }
    Ok(out)
}

fn run_engine(inst: &AuditInstance, t: Theorem) -> Result<Produced> {
    let g = &inst.graph;
    let k = inst.k;
    let hyp = Hypotheses::Verify;
    Ok(match t {
        Theorem::BipartiteFactor => Produced::Factor(modk::bipartite_f_factor(g, &inst.f()?, None, hyp)?),
        Theorem::MaxBipartiteFactor => {
            let mode = if g.vertex_count() <= EXACT_MAX_VERTICES {
                CutMode::Exact
            } else {
                CutMode::Bound
            };
            Produced::Factor(max_bipartite_factor(g, mode)?.factor)
        }
        Theorem::GeneralFactor => Produced::Factor(modk::general_f_factor(g, &inst.f()?, hyp)?),
        Theorem::HighTreeFactor => {
            let (h, z) = modk::high_tree_sharp_f_factor(g, &inst.f()?, hyp)?;
            Produced::Special(h, z)
        }
        Theorem::EulerianHalf => Produced::Factor(modk::eulerian_half_factor(g, inst.z.unwrap_or(0))?),
        Theorem::RegularFactor => Produced::Factor(regular::bipartite_modk_regular_factor(g, k, RegularRoute::Edge, hyp)?),
        Theorem::AfkSubgraph => match regular::mod_q_regular_subgraph(g, k, regular::DEFAULT_SEARCH_NODES)? {
            Some(h) => Produced::Factor(h),
            None => Produced::Nothing("the search space holds no such subgraph".into()),
        },
        Theorem::KonigScale => {
            let q = inst.m.unwrap_or(k);
            let one = IntFunc::constant(g.vertex_count(), 1);
            Produced::Factor(regular::konig_scale(g, &Factor::full(g), &one, q, k)?)
        }
    })
}

fn conclusions(inst: &AuditInstance, t: Theorem, h: &Factor, special: Option<VertexId>) -> Result<Vec<Clause>> {
    let g = &inst.graph;
    let k = inst.k;
    let d: Vec<i64> = g.degrees().iter().map(|&x| x as i64).collect();
    let mut out = Vec::new();
    match t {
        Theorem::BipartiteFactor => {
            out.push(clause("residues", check_residues(g, h, &inst.f()?)));
            let (lo, hi) = half_window(g, k);
            out.push(clause("window", check_window(g, h, &lo, &hi)));
        }
        Theorem::MaxBipartiteFactor => {
            let m = inst.m.unwrap_or(1);
            out.push(clause("bipartite", check_bipartite(g, h)));
            let cuts = match oracle::half_cut_violation(g, h) {
                Ok(None) => Ok(()),
                Ok(Some(a)) => Err(format!("A = {:?} keeps less than half its cut", a.as_slice())),
                Err(Error::TooLarge { .. }) => Ok(()),
                Err(e) => Err(e.to_string()),
            };
            out.push(clause("half-cuts", cuts));
            let (hg, _) = h.graph(g);
            out.push(clause("tree-connectivity", tree_connected(&hg, m)));
        }
        Theorem::GeneralFactor => {
            let k = k as i64;
            out.push(clause("residues", check_residues(g, h, &inst.f()?)));
            let lo = IntFunc(d.iter().map(|x| x / 2 - (k - 1)).collect());
            let hi = IntFunc(d.iter().map(|x| x / 2 + k).collect());
            out.push(clause("window", check_window(g, h, &lo, &hi)));
        }
        Theorem::HighTreeFactor => {
            let f = inst.f()?;
            out.push(clause("residues", check_residues(g, h, &f)));
            let (mut lo, hi) = half_window(g, k);
            let exceptional = modk::is_high_tree_exceptional(g, &f);
            if let Some(z) = special {
                lo.0[z] = (d[z] + 1) / 2 - k as i64;
            }
            out.push(clause("window", check_window(g, h, &lo, &hi)));
            out.push(clause(
                "exception-only-when-needed",
                if special.is_some() == exceptional {
                    Ok(())
                } else {
                    Err(format!("relaxed vertex {special:?} but exceptional = {exceptional}"))
                },
            ));
        }
        Theorem::EulerianHalf => {
            let z = inst.z.unwrap_or(0);
            let mut exact = IntFunc(d.iter().map(|x| x / 2).collect());
            exact.0[z] += (g.edge_count() % 2) as i64;
            out.push(clause("half-degrees", check_window(g, h, &exact, &exact)));
        }
        Theorem::RegularFactor => {
            out.push(clause("regular", check_modk_regular_factor(g, h, k)));
            out.push(clause("bipartite", check_bipartite(g, h)));
        }
        Theorem::AfkSubgraph => {
            out.push(clause("regular-subgraph", check_modk_regular_subgraph(g, h, k)));
        }
        Theorem::KonigScale => {
            let kk = IntFunc::constant(g.vertex_count(), k as i64);
            out.push(clause("k-regular", check_window(g, h, &kk, &kk)));
        }
    }
    Ok(out)
}

fn report(t: Theorem, outcome: Outcome, failing: Option<String>, hyps: Vec<Clause>, concl: Vec<Clause>, h: Option<(&Multigraph, &Factor)>) -> AuditReport {
    AuditReport {
        theorem: t,
        outcome,
        failing_clause: failing,
        hypotheses: hyps,
        conclusions: concl,
        factor_edges: h.map(|(_, h)| h.edge_ids()),
        degrees: h.map(|(g, h)| h.degrees(g)),
    }
}

/// Audit one instance. Input errors (wrong lengths, bad `z`, oversize for an
/// exact step) come back as `Err`; everything else is in the report.
pub fn theorem_audit(inst: &AuditInstance, t: Theorem) -> Result<AuditReport> {
    if inst.k == 0 {
        return Err(Error::ZeroModulus);
    }
    let hyps = hypotheses(inst, t)?;
    if let Some(c) = hyps.iter().find(|c| !c.holds) {
        let name = c.clause.clone();
        return Ok(report(t, Outcome::HypothesisFail, Some(name), hyps, Vec::new(), None));
    }
    let produced = match catch_unwind(AssertUnwindSafe(|| run_engine(inst, t))) {
        Ok(Ok(p)) => p,
        Ok(Err(Error::Hypothesis(msg))) => {
            return Ok(report(t, Outcome::HypothesisFail, Some(format!("engine: {msg}")), hyps, Vec::new(), None))
        }
        Ok(Err(e)) => return Ok(report(t, Outcome::EngineError, Some(e.to_string()), hyps, Vec::new(), None)),
        Err(_) => {
            return Ok(report(
                t,
                Outcome::ConclusionFail,
                Some("engine self-check".into()),
                hyps,
                Vec::new(),
                None,
            ))
        }
    };
    let (h, special) = match produced {
        Produced::Factor(h) => (h, None),
        Produced::Special(h, z) => (h, z),
        Produced::Nothing(why) => {
            let c = vec![clause("exists", Err(why))];
            return Ok(report(t, Outcome::ConclusionFail, Some("exists".into()), hyps, c, None));
        }
    };
    let concl = conclusions(inst, t, &h, special)?;
    let failing = concl.iter().find(|c| !c.holds).map(|c| c.clause.clone());
    let outcome = if failing.is_some() {
        Outcome::ConclusionFail
    } else {
        Outcome::Pass
    };
    Ok(report(t, outcome, failing, hyps, concl, Some((&inst.graph, &h))))
}

/// A random instance meeting the theorem's hypotheses, from `seed`.
/// Vertex counts stay at desk scale (at most 12).
pub fn sample_instance(t: Theorem, k: usize, seed: u64) -> Result<AuditInstance> {
    if k == 0 {
        return Err(Error::ZeroModulus);
    }
    let pick = |lo: usize, hi: usize| lo + (seed as usize) % (hi - lo + 1);
    let inst = match t {
        Theorem::BipartiteFactor => {
            let g = gen::gen_edge_connected(pick(4, 12), 3 * k - 3, true, None, seed)?;
            let f = gen::gen_compatible_f(&g, k, seed)?;
            AuditInstance {
                f: Some(f),
                ..AuditInstance::new(g, k)
            }
        }
        Theorem::MaxBipartiteFactor => {
            let m = 1 + (seed as usize / 7) % 2;
            AuditInstance {
                m: Some(m),
                ..AuditInstance::new(gen::gen_tree_connected(pick(3, 10), 2 * m, seed)?, k)
            }
        }
        Theorem::GeneralFactor => {
            // a maximum cut keeps at least half of every cut
            let g = gen::gen_edge_connected(pick(4, 10), 6 * k - 6, false, None, seed)?;
            let f = gen::gen_compatible_f(&g, k, seed)?;
            AuditInstance {
                f: Some(f),
                ..AuditInstance::new(g, k)
            }
        }
        Theorem::HighTreeFactor => {
            let g = gen::gen_tree_connected(pick(3, 7), 6 * k - 2, seed)?;
            let f = gen::gen_compatible_f(&g, k, seed)?;
            AuditInstance {
                f: Some(f),
                ..AuditInstance::new(g, k)
            }
        }
        Theorem::EulerianHalf => {
            let n = pick(2, 10);
            let g = gen::gen_eulerian(n, (seed as usize / 11) % 5, None, seed)?;
            AuditInstance {
                z: Some((seed as usize / 3) % n),
                ..AuditInstance::new(g, k)
            }
        }
        Theorem::RegularFactor => AuditInstance::new(
            gen::gen_edge_connected(pick(4, 10), 4 * k - 1, false, Some((6 * k).saturating_sub(7)), seed)?,
            k,
        ),
        Theorem::AfkSubgraph => {
            let n = pick(2, 10);
            let m = k.saturating_sub(1) * n + 1 + (seed as usize / 13) % 3;
            AuditInstance::new(gen::gen_multigraph(n, m, false, seed)?, k)
        }
        Theorem::KonigScale => {
            let q = k + (seed as usize / 5) % 3;
            AuditInstance {
                m: Some(q),
                ..AuditInstance::new(gen::gen_regular_bipartite(pick(1, 20), q, seed)?, k)
            }
        }
    };
    Ok(inst)
}

/// Sample and audit seeds `0..seeds`; reports come back in seed order.
pub fn audit_seeds(exec: Exec, t: Theorem, k: usize, seeds: u64) -> Vec<Result<AuditReport>> {
    par::map_range(exec, seeds, |s| sample_instance(t, k, s).and_then(|inst| theorem_audit(&inst, t)))
}
