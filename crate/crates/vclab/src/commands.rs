//! One function per subcommand. Each returns a [`Certificate`]; input
//! problems (unreadable or malformed files) are errors, while failures
//! inside an analysis become a `FAILED` certificate.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Map, Value};
use vclab_core::coloring::{
    chi_sv, chi_v, complementary_slackness, skeleton_of, strict_complementarity, ChiResult, VectorColoring,
};
use vclab_core::graph::categorical_product;
use vclab_core::product::{
    convex_decompose, corollary_pipeline_with, direct_sum, is_induced_by_g, is_induced_by_h, necessary_conditions_with,
    rank_accounting_with, verify_hedetniemi_with, CorollaryReport, CorollaryStatus, HedetniemiReport, MinIdentity,
    NecessaryConditions, ProductAnalysis, ProductSolves, RankEstimate, Verdict,
};
use vclab_core::structure::{arrow_set, is_neighborly, second_coloring, uvc_check_with, UvcVerdict};
use vclab_core::{Graph, Tolerances};

use crate::cert::{edges, num, sym, Certificate, Status};
use crate::config::RunConfig;
use crate::io::{graph_digest, read_coloring, read_graph, write_coloring, ColoringFile};
use crate::{Error, Result};

type Analysis = vclab_core::Result<(Value, Status)>;

struct Input {
    graph: Graph,
    name: String,
    digest: String,
}

fn load(path: &Path) -> Result<Input> {
    let graph = read_graph(path)?;
    let name = path
        .file_name()
        .map_or_else(|| path.display().to_string(), |f| f.to_string_lossy().into_owned());
    let digest = graph_digest(&graph);
    Ok(Input { graph, name, digest })
}

fn certify(command: &str, inputs: &[&Input], cfg: &RunConfig, run: impl FnOnce() -> Analysis) -> Certificate {
    let (results, status) = match run() {
        Ok(x) => x,
        Err(e) => (json!({ "error": e.to_string() }), Status::Failed),
    };
    Certificate {
        command: command.into(),
        inputs: inputs.iter().map(|i| (i.name.clone(), i.digest.clone())).collect(),
        config: cfg.echo(),
        results,
        status,
    }
}

fn rank_json(r: &RankEstimate) -> Value {
    json!({
        "primal": r.primal,
        "dual_corank": r.dual_corank,
        "exact": r.exact(),
    })
}

fn chi_payload(g: &Graph, chi: &ChiResult, tol: &Tolerances) -> vclab_core::Result<Value> {
    let sc = strict_complementarity(&chi.coloring, &chi.dual, tol.rank_tol)?;
    let slack = complementary_slackness(g, &chi.coloring, &chi.dual)?;
    let sk = skeleton_of(g, chi)?;
    Ok(json!({
        "n": g.order(),
        "m": g.size(),
        "t": num(chi.t),
        "primal_value": num(chi.primal_value),
        "dual_value": num(chi.dual_value),
        "gap": num((chi.primal_value - chi.dual_value).abs()),
        "iterations": chi.iterations,
        "merit": num(chi.merit),
        "rank": {
            "primal": sc.rank_primal,
            "dual": sc.rank_dual,
            "dual_corank": chi.dual.corank,
        },
        "strictly_complementary": sc.strict,
        "slackness": {
            "product_norm": num(slack.product_norm),
            "edge_residual": num(slack.edge_residual),
        },
        "skeleton": {
            "edges": edges(sk.graph.edges()),
            "dual_support_contained": sk.dual_support_contained,
        },
        "dual_support": edges(chi.dual.support.edges()),
        "dual_positive_diagonal": chi.dual.positive_diagonal,
        "gram": sym(&chi.coloring.gram),
        "dual": sym(&chi.dual.b),
    }))
}

pub fn cmd_chi(path: &Path, strict: bool, cfg: &RunConfig) -> Result<Certificate> {
    let input = load(path)?;
    let tol = cfg.tolerances();
    Ok(certify("chi", &[&input], cfg, || {
        let g = &input.graph;
        let chi = chi_v(g, &tol)?;
        let mut payload = chi_payload(g, &chi, &tol)?;
        if strict {
            let s = chi_sv(g, &tol)?;
            payload["strict"] = json!({
                "t": num(s.t),
                "primal_value": num(s.primal_value),
                "dual_value": num(s.dual_value),
                "iterations": s.iterations,
            });
        }
        Ok((payload, Status::Ok))
    }))
}

pub fn cmd_uvc(path: &Path, cfg: &RunConfig) -> Result<Certificate> {
    let input = load(path)?;
    let tol = cfg.tolerances();
    Ok(certify("uvc", &[&input], cfg, || {
        let g = &input.graph;
        let chi = chi_v(g, &tol)?;
        let rep = uvc_check_with(g, &chi, &tol)?;
        let mut status = if rep.marginal { Status::Inconclusive } else { Status::Ok };
        let mut payload = json!({
            "t": num(chi.t),
            "verdict": match rep.verdict {
                UvcVerdict::Unique => "unique",
                UvcVerdict::NotUnique => "not_unique",
            },
            "stage": rep.stage,
            "rank": rep.rank,
            "kernel_dimension": rep.kernel_dimension,
            "smallest_singular_value": num(rep.smallest_singular_value),
            "lp_optimum": rep.lp_optimum.map(num),
            "marginal": rep.marginal,
        });
        if let Some(cert) = &rep.certificate {
            let values: Vec<Value> = cert
                .tight_edge_values
                .iter()
                .map(|&((i, j), v)| json!([i, j, num(v)]))
                .collect();
            payload["perturbation"] = json!({
                "r": sym(&cert.r),
                "equality_residual": num(cert.equality_residual),
                "tight_edge_values": values,
                "epsilon_max": num(cert.epsilon_max),
            });
            match second_coloring(g, &chi.coloring, cert, &tol) {
                Ok(other) => {
                    payload["second_coloring"] = json!({
                        "gram": sym(&other.gram),
                        "difference": num(other.gram.sub(&chi.coloring.gram).frobenius_norm()),
                        "feasible": true,
                    });
                }
                Err(e) => {
                    payload["second_coloring"] = json!({ "error": e.to_string() });
                    status = Status::Inconclusive;
                }
            }
        }
        Ok((payload, status))
    }))
}

pub fn cmd_skeleton(path: &Path, cfg: &RunConfig) -> Result<Certificate> {
    let input = load(path)?;
    let tol = cfg.tolerances();
    Ok(certify("skeleton", &[&input], cfg, || {
        let g = &input.graph;
        let chi = chi_v(g, &tol)?;
        let sk = skeleton_of(g, &chi)?;
        let payload = json!({
            "t": num(chi.t),
            "edges": edges(sk.graph.edges()),
            "isolated": sk.graph.isolated_vertices(),
            "components": sk.graph.connected_components(),
            "equals_graph": sk.graph == *g,
            "dual_support_contained": sk.dual_support_contained,
        });
        let status = if sk.warning() { Status::Inconclusive } else { Status::Ok };
        Ok((payload, status))
    }))
}

pub fn cmd_neighborly(path: &Path, cfg: &RunConfig) -> Result<Certificate> {
    let input = load(path)?;
    let tol = cfg.tolerances();
    Ok(certify("neighborly", &[&input], cfg, || {
        let g = &input.graph;
        let chi = chi_v(g, &tol)?;
        let vc = &chi.coloring;
        let isolated = skeleton_of(g, &chi)?.graph.isolated_vertices();
        let mut vertices = Vec::with_capacity(g.order());
        let mut non_neighborly = Vec::new();
        let mut marginal = false;
        for i in 0..g.order() {
            let entry = match is_neighborly(vc, i, tol.tight_tol)? {
                Some(w) => {
                    let arrows = arrow_set(vc, i, tol.tight_tol)?;
                    marginal |= w.marginal || arrows.marginal;
                    json!({
                        "vertex": i,
                        "neighborly": true,
                        "coefficients": w.coefficients.iter().map(|&(j, a)| json!([j, num(a)])).collect::<Vec<_>>(),
                        "residual": num(w.residual),
                        "forced_identity_residual": num(w.forced_identity_residual),
                        "arrow_set": arrows.targets,
                        "marginal": w.marginal || arrows.marginal,
                    })
                }
                None => {
                    non_neighborly.push(i);
                    json!({ "vertex": i, "neighborly": false })
                }
            };
            vertices.push(entry);
        }
        let consistent = g.is_empty() || non_neighborly == isolated;
        let payload = json!({
            "t": num(chi.t),
            "vertices": vertices,
            "non_neighborly": non_neighborly,
            "skeleton_isolated": isolated,
            "consistent_with_skeleton": consistent,
        });
        let status = if consistent && !marginal { Status::Ok } else { Status::Inconclusive };
        Ok((payload, status))
    }))
}

/// Analyses requested from `product`.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProductFlags {
    pub verify_hedetniemi: bool,
    /// Adds the strict values to the min-identity check.
    pub strict: bool,
    pub rank_accounting: bool,
    pub corollary: bool,
    pub necessary: bool,
    pub decompose: Option<PathBuf>,
}

impl ProductFlags {
    fn needs_product_solve(&self) -> bool {
        self.verify_hedetniemi || self.rank_accounting || self.necessary
    }
}

fn solve_all(g: &Graph, h: &Graph, tol: &Tolerances) -> vclab_core::Result<ProductSolves> {
    let p = categorical_product(g, h);
    let ((cg, ch), cp) = rayon::join(
        || rayon::join(|| chi_v(g, tol), || chi_v(h, tol)),
        || chi_v(&p, tol),
    );
    Ok(ProductSolves {
        g: cg?,
        h: ch?,
        product: cp?,
    })
}

fn min_identity_json(m: &MinIdentity) -> Value {
    json!({
        "g": num(m.chi_g),
        "h": num(m.chi_h),
        "product": num(m.chi_product),
        "discrepancy": num(m.discrepancy),
        "holds": m.holds,
    })
}

fn hedetniemi_json(r: &HedetniemiReport) -> Value {
    json!({
        "vector": min_identity_json(&r.vector),
        "strict": r.strict.as_ref().map(min_identity_json),
        "kronecker": r.kronecker.as_ref().map(|k| json!({
            "lambda_min": num(k.lambda_min),
            "lambda_max": num(k.lambda_max),
            "norm": num(k.norm),
            "expected": num(k.expected),
            "ok": k.ok,
        })),
        "passed": r.passed(),
    })
}

fn analysis_json(a: &ProductAnalysis) -> Value {
    json!({
        "case": a.case.as_str(),
        "swapped": a.swapped,
        "chi": { "g": num(a.chi_g), "h": num(a.chi_h), "product": num(a.chi_product) },
        "rk": {
            "g": rank_json(&a.rk_g),
            "h": rank_json(&a.rk_h),
            "product": rank_json(&a.rk_product),
            "bracket": a.rk_product.exact().is_none().then(|| {
                let (lo, hi) = a.rk_product.bracket();
                json!([lo, hi])
            }),
        },
        "verdict": a.verdict.as_str(),
        "rank_condition": a.rank_condition,
        "lower_bound_holds": a.lower_bound_holds,
        "hedetniemi_residual": num(a.hedetniemi_residual),
    })
}

fn corollary_json(r: &CorollaryReport) -> Value {
    json!({
        "case": r.case.as_str(),
        "swapped": r.swapped,
        "status": r.status.as_str(),
        "hypothesis_checks": r.checks.iter().map(|c| json!({
            "name": c.name,
            "passed": c.passed,
            "detail": c.detail,
        })).collect::<Vec<_>>(),
        "construction_trace": r.trace,
        "epsilon": r.epsilon.map(num),
        "expected_corank": r.expected_corank,
        "product_corank": r.product_corank,
        "product_value": r.product_value.map(num),
    })
}

fn necessary_json(n: &NecessaryConditions) -> Value {
    json!({
        "case": n.case.as_str(),
        "swapped": n.swapped,
        "g_skeleton_isolated": n.g_isolated,
        "g_non_neighborly": n.g_non_neighborly,
        "h_connected": n.h_connected,
        "g_skeleton_connected": n.g_skeleton_connected,
        "h_skeleton_connected": n.h_skeleton_connected,
        "inconsistent_neighborliness": n.inconsistent_neighborliness,
        "holds": n.holds,
        "contradiction": n.contradiction,
    })
}

fn decompose_json(w: &VectorColoring, g: &Graph, h: &Graph, tol: &Tolerances) -> vclab_core::Result<Value> {
    let (ng, nh) = (g.order(), h.order());
    let mut out = json!({
        "t": num(w.t),
        "induced_by_g": is_induced_by_g(w, ng, nh, tol.tight_tol)?,
        "induced_by_h": is_induced_by_h(w, ng, nh, tol.tight_tol)?,
    });
    match convex_decompose(w, g, h, tol)? {
        Some(d) => {
            out["decomposable"] = json!(true);
            out["alpha"] = num(d.alpha);
            out["fit_residual"] = num(d.fit_residual);
            out["shift_interval"] = json!([num(d.shift_interval.0), num(d.shift_interval.1)]);
            out["m_part"] = d.m_part.as_ref().map_or(Value::Null, sym);
            out["n_part"] = d.n_part.as_ref().map_or(Value::Null, sym);
        }
        None => out["decomposable"] = json!(false),
    }
    Ok(out)
}

pub fn cmd_product(g_path: &Path, h_path: &Path, flags: &ProductFlags, cfg: &RunConfig) -> Result<Certificate> {
    let gi = load(g_path)?;
    let hi = load(h_path)?;
    let coloring = flags.decompose.as_deref().map(read_coloring).transpose()?;
    let tol = cfg.tolerances();
    Ok(certify("product", &[&gi, &hi], cfg, || {
        let (g, h) = (&gi.graph, &hi.graph);
        let mut payload = Map::new();
        let mut status = Status::Ok;
        let solves = if flags.needs_product_solve() {
            Some(solve_all(g, h, &tol)?)
        } else {
            None
        };
        let factors = match (&solves, flags.corollary) {
            (Some(s), _) => Some((s.g.clone(), s.h.clone())),
            (None, true) => {
                let (a, b) = rayon::join(|| chi_v(g, &tol), || chi_v(h, &tol));
                Some((a?, b?))
            }
            (None, false) => None,
        };
        if flags.verify_hedetniemi {
            let s = solves.as_ref().expect("solved above");
            let strict = if flags.strict {
                let p = categorical_product(g, h);
                Some((chi_sv(g, &tol)?.t, chi_sv(h, &tol)?.t, chi_sv(&p, &tol)?.t))
            } else {
                None
            };
            let rep = verify_hedetniemi_with(s, strict, &tol)?;
            if !rep.passed() {
                status = status.and(Status::Failed);
            }
            payload.insert("hedetniemi".into(), hedetniemi_json(&rep));
        }
        let mut verdict = None;
        if flags.rank_accounting {
            let a = rank_accounting_with(solves.as_ref().expect("solved above"));
            if a.rank_condition.is_none() {
                status = status.and(Status::Inconclusive);
            }
            if !a.lower_bound_holds {
                status = status.and(Status::Failed);
            }
            verdict = Some(a.verdict);
            payload.insert("case".into(), json!(a.case.as_str()));
            payload.insert("verdict".into(), json!(a.verdict.as_str()));
            payload.insert("rank_accounting".into(), analysis_json(&a));
        }
        if flags.corollary {
            let (cg, ch) = factors.as_ref().expect("solved above");
            let r = corollary_pipeline_with(g, h, cg, ch, &tol)?;
            if r.status == CorollaryStatus::ConstructionFailed {
                status = status.and(Status::Failed);
            }
            if r.status == CorollaryStatus::Certified {
                let expected = match r.case {
                    vclab_core::product::ProductCase::LessThan => Verdict::AllInducedByG,
                    vclab_core::product::ProductCase::Equal => Verdict::AllConvexCombinations,
                };
                if verdict.is_some_and(|v| v != expected) {
                    status = status.and(Status::Failed);
                    payload.insert("verdict_mismatch".into(), json!(true));
                }
            }
            payload.insert("corollary".into(), corollary_json(&r));
        }
        if flags.necessary {
            let (cg, ch) = factors.as_ref().expect("solved above");
            let n = necessary_conditions_with(g, h, cg, ch, verdict, &tol)?;
            if n.contradiction {
                status = status.and(Status::Failed);
            }
            payload.insert("necessary_conditions".into(), necessary_json(&n));
        }
        if let Some(c) = &coloring {
            let p = categorical_product(g, h);
            let w = VectorColoring::from_gram(&p, c.to_gram().map_err(core_err)?, &tol)?;
            payload.insert("decompose".into(), decompose_json(&w, g, h, &tol)?);
        }
        Ok((Value::Object(payload), status))
    }))
}

fn core_err(e: Error) -> vclab_core::Error {
    match e {
        Error::Core(c) => c,
        other => vclab_core::Error::InvalidParameter(other.to_string()),
    }
}

/// Writes the direct-sum coloring of optimal factor colorings to `out`.
pub fn cmd_direct_sum(g_path: &Path, h_path: &Path, alpha: f64, out: &Path, cfg: &RunConfig) -> Result<Certificate> {
    let gi = load(g_path)?;
    let hi = load(h_path)?;
    let tol = cfg.tolerances();
    let mut written: Option<ColoringFile> = None;
    let cert = certify("direct-sum", &[&gi, &hi], cfg, || {
        let (g, h) = (&gi.graph, &hi.graph);
        let (cg, ch) = rayon::join(|| chi_v(g, &tol), || chi_v(h, &tol));
        let (cg, ch) = (cg?, ch?);
        let w = direct_sum(g, &cg.coloring, h, &ch.coloring, alpha, &tol)?;
        written = Some(ColoringFile::from_gram(w.t, &w.gram));
        Ok((
            json!({
                "alpha": num(alpha),
                "t": num(w.t),
                "rank": w.rank(),
                "output": out.file_name().map(|f| f.to_string_lossy().into_owned()),
            }),
            Status::Ok,
        ))
    });
    if let Some(c) = written {
        write_coloring(out, &c)?;
    }
    Ok(cert)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    pub command: String,
    pub graphs: Vec<PathBuf>,
    #[serde(default)]
    pub strict: bool,
    #[serde(default, flatten)]
    pub product: ProductFlagsEntry,
}

/// Product flags as they appear in a manifest (paths relative to it).
#[derive(Debug, Clone, Default, Deserialize)]
pub struct ProductFlagsEntry {
    #[serde(default)]
    pub verify_hedetniemi: bool,
    #[serde(default)]
    pub rank_accounting: bool,
    #[serde(default)]
    pub corollary: bool,
    #[serde(default)]
    pub necessary: bool,
    #[serde(default)]
    pub decompose: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default)]
    pub entries: Vec<ManifestEntry>,
}

fn run_entry(entry: &ManifestEntry, base: &Path, cfg: &RunConfig) -> Result<Certificate> {
    let paths: Vec<PathBuf> = entry.graphs.iter().map(|p| base.join(p)).collect();
    let want = |k: usize| -> Result<()> {
        if paths.len() == k {
            Ok(())
        } else {
            Err(Error::Config(format!("`{}` takes {k} graph(s), got {}", entry.command, paths.len())))
        }
    };
    match entry.command.as_str() {
        "chi" => want(1).and_then(|_| cmd_chi(&paths[0], entry.strict, cfg)),
        "uvc" => want(1).and_then(|_| cmd_uvc(&paths[0], cfg)),
        "skeleton" => want(1).and_then(|_| cmd_skeleton(&paths[0], cfg)),
        "neighborly" => want(1).and_then(|_| cmd_neighborly(&paths[0], cfg)),
        "product" => {
            want(2)?;
            let f = &entry.product;
            let flags = ProductFlags {
                verify_hedetniemi: f.verify_hedetniemi,
                strict: entry.strict,
                rank_accounting: f.rank_accounting,
                corollary: f.corollary,
                necessary: f.necessary,
                decompose: f.decompose.as_ref().map(|p| base.join(p)),
            };
            cmd_product(&paths[0], &paths[1], &flags, cfg)
        }
        other => Err(Error::Config(format!("unknown batch command `{other}`"))),
    }
}

pub fn cmd_batch(manifest_path: &Path, cfg: &RunConfig) -> Result<Certificate> {
    let text = std::fs::read_to_string(manifest_path).map_err(|source| Error::Io {
        path: manifest_path.display().to_string(),
        source,
    })?;
    let manifest: Manifest = serde_json::from_str(&text).map_err(|e| Error::from(e).at(manifest_path))?;
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    let run = |(k, e): (usize, &ManifestEntry)| -> Value {
        let (status, body) = match run_entry(e, base, cfg) {
            Ok(c) => (c.status, c.to_value()),
            Err(err) => (Status::Failed, json!({ "error": err.to_string() })),
        };
        json!({
            "index": k,
            "command": e.command,
            "graphs": e.graphs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
            "status": status.as_str(),
            "certificate": body,
        })
    };
    let entries: Vec<Value> = if cfg.parallel {
        manifest.entries.par_iter().enumerate().map(run).collect()
    } else {
        manifest.entries.iter().enumerate().map(run).collect()
    };
    let count = |s: Status| entries.iter().filter(|e| e["status"] == s.as_str()).count();
    let (ok, inconclusive, failed) = (count(Status::Ok), count(Status::Inconclusive), count(Status::Failed));
    let status = if failed > 0 {
        Status::Failed
    } else if inconclusive > 0 {
        Status::Inconclusive
    } else {
        Status::Ok
    };
    Ok(Certificate {
        command: "batch".into(),
        inputs: Vec::new(),
        config: cfg.echo(),
        results: json!({
            "entries": entries,
            "counts": { "ok": ok, "inconclusive": inconclusive, "failed": failed, "total": entries.len() },
        }),
        status,
    })
}
