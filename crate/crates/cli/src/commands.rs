use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};

use smoothclass::analysis::{build_coloring, build_component_graph, closed_embeddings, full_coloring_matrix, is_tree_pair_window, TreePairViolation};
use smoothclass::convex::{classify_all, decide_convex_ramsey, DecisionMethod};
use smoothclass::density::{degeneracy, max_density, non_ramsey_certificate, one_point_refutation, RamseyVerdict, SearchStatus};
use smoothclass::smooth::{build_zero_min_witness, classify_zero_algebraic, closed_in_host, closure, is_closed, is_strictly_closed, member, ClassSpec, Violation};
use smoothclass::witness::{build_reduced_witness, build_witness, verify_claims, ClaimStatus, WitnessBundle, WitnessWindow};
use smoothclass::{delta_of, enumerate_copies, relative_delta, Embedding, Graph, VertexSet};

use crate::report::{alpha, input_error, matrix_rows, names, rational, set, Ctx, Outcome};
use crate::{Command, PairArgs, WitnessCommand, ZeroMinCommand};

type Body = Map<String, Value>;

pub fn name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Delta { .. } => "delta",
        Command::Closed { .. } => "closed",
        Command::Closure { .. } => "closure",
        Command::Member { .. } => "member",
        Command::Maxdensity { .. } => "maxdensity",
        Command::Degeneracy { .. } => "degeneracy",
        Command::RamseyCert { .. } => "ramsey-cert",
        Command::OnePoint { .. } => "one-point",
        Command::Convex { .. } => "convex",
        Command::Classify { .. } => "classify",
        Command::Embeddings { .. } => "embeddings",
        Command::Treepair { .. } => "treepair",
        Command::Color { .. } => "color",
        Command::Witness(WitnessCommand::Build { .. }) => "witness build",
        Command::Witness(WitnessCommand::Verify { .. }) => "witness verify",
        Command::Witness(WitnessCommand::Window { .. }) => "witness window",
        Command::ZeroMin(ZeroMinCommand::Build { .. }) => "zero-min build",
        Command::ZeroMin(ZeroMinCommand::Classify { .. }) => "zero-min classify",
    }
}

pub fn run(cmd: Command, ctx: &mut Ctx) -> Outcome<Body> {
    match cmd {
        Command::Delta { graph, alpha: a, set: s, over } => delta_cmd(ctx, &graph, &a, s.as_deref(), over.as_deref()),
        Command::Closed {
            alpha: a,
            sub,
            sup,
            within,
            strict,
        } => closed_cmd(ctx, &a, &sub, &sup, within.as_deref(), strict),
        Command::Closure { graph, alpha: a, set: s } => closure_cmd(ctx, &graph, &a, &s),
        Command::Member { graph, spec, alpha: a } => member_cmd(ctx, &graph, spec.as_deref(), a.as_deref()),
        Command::Maxdensity { graph } => {
            let g = ctx.graph(&graph)?;
            let d = max_density(&g)?;
            Ok(obj(json!({ "max_density": rational(&d.value), "witness": names(&d.witness, &g) })))
        }
        Command::Degeneracy { graph } => {
            let g = ctx.graph(&graph)?;
            Ok(obj(json!({ "eta_star": degeneracy(&g)? })))
        }
        Command::RamseyCert { b, c, r } => ramsey_cmd(ctx, &b, &c, r),
        Command::OnePoint {
            alpha: a,
            spec,
            n,
            r,
            ordered,
        } => one_point_cmd(ctx, a.as_deref(), spec.as_deref(), n, r, ordered),
        Command::Convex { matrix, threshold } => convex_cmd(ctx, &matrix, &threshold),
        Command::Classify { rows, cols, threshold } => classify_cmd(ctx, rows, cols, &threshold),
        Command::Embeddings { pattern, window, alpha: a } => embeddings_cmd(ctx, &pattern, &window, &a),
        Command::Treepair { pair } => treepair_cmd(ctx, &pair),
        Command::Color {
            matrix,
            pair,
            root_row,
            root_copy,
        } => color_cmd(ctx, &matrix, &pair, root_row, root_copy),
        Command::Witness(WitnessCommand::Build { out, reduced }) => witness_build(&out, reduced),
        Command::Witness(WitnessCommand::Verify { reduced }) => witness_verify(ctx, reduced),
        Command::Witness(WitnessCommand::Window { out, reduced, extend }) => witness_window(&out, reduced, &extend),
        Command::ZeroMin(ZeroMinCommand::Build { base, m, out }) => zero_min_build(ctx, &base, m, out.as_deref()),
        Command::ZeroMin(ZeroMinCommand::Classify { host, set: s, over, alpha: a }) => zero_min_classify(ctx, &host, &s, &over, &a),
    }
}

fn obj(v: Value) -> Body {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("report bodies are objects"),
    }
}

fn graph_value(g: &Graph) -> Value {
    serde_json::to_value(g.to_json()).expect("graph serialises")
}

fn write_json(path: &Path, v: &Value) -> Outcome<()> {
    let text = serde_json::to_string_pretty(v).expect("value serialises") + "\n";
    fs::write(path, text).map_err(|e| input_error(format!("cannot write {}: {e}", path.display())))
}

fn one_based(k: usize, what: &str) -> Outcome<usize> {
    k.checked_sub(1).ok_or_else(|| input_error(format!("{what} is 1-based; got 0")))
}

fn delta_cmd(ctx: &mut Ctx, path: &Path, a: &str, s: Option<&str>, over: Option<&str>) -> Outcome<Body> {
    let g = ctx.graph(path)?;
    let alpha = alpha(a)?;
    let x = match s {
        Some(list) => set(&g, list)?,
        None => g.all_vertices(),
    };
    let value = match over {
        Some(list) => relative_delta(&x, &set(&g, list)?, &g, &alpha)?,
        None => delta_of(&g, &x, &alpha),
    };
    Ok(obj(json!({ "alpha": rational(&alpha), "delta": rational(&value) })))
}

fn closed_cmd(ctx: &mut Ctx, a: &str, sub: &str, sup: &Path, within: Option<&str>, strict: bool) -> Outcome<Body> {
    let host = ctx.graph(sup)?;
    let alpha = alpha(a)?;
    let lower = set(&host, sub)?;
    let upper = match within {
        Some(list) => set(&host, list)?,
        None => host.all_vertices(),
    };
    let v = if strict {
        is_strictly_closed(&lower, &upper, &host, &alpha)?
    } else {
        is_closed(&lower, &upper, &host, &alpha)?
    };
    let witness = v.witness.as_ref().map(|w| names(w, &host));
    let witness_delta = v.witness.as_ref().map(|w| rational(&delta_of(&host, w, &alpha)));
    Ok(obj(json!({
        "alpha": rational(&alpha),
        "strict": strict,
        "closed": v.closed,
        "delta_sub": rational(&delta_of(&host, &lower, &alpha)),
        "witness": witness,
        "witness_delta": witness_delta,
    })))
}

fn closure_cmd(ctx: &mut Ctx, path: &Path, a: &str, list: &str) -> Outcome<Body> {
    let g = ctx.graph(path)?;
    let alpha = alpha(a)?;
    let s = set(&g, list)?;
    let c = closure(&s, &g, &alpha)?;
    let steps: Vec<Value> = c.certificate.iter().map(|w| names(w, &g)).collect();
    Ok(obj(json!({
        "alpha": rational(&alpha),
        "closure": names(&c.closure, &g),
        "delta": rational(&delta_of(&g, &c.closure, &alpha)),
        "certificate": steps,
    })))
}

fn class_spec(ctx: &mut Ctx, spec: Option<&Path>, a: Option<&str>) -> Outcome<ClassSpec> {
    match (spec, a) {
        (Some(p), _) => ctx.spec(p),
        (None, Some(a)) => Ok(ClassSpec::k_plus(alpha(a)?)),
        (None, None) => Err(input_error("one of --spec or --alpha is required")),
    }
}

fn member_cmd(ctx: &mut Ctx, path: &Path, spec: Option<&Path>, a: Option<&str>) -> Outcome<Body> {
    let g = ctx.graph(path)?;
    let spec = class_spec(ctx, spec, a)?;
    let m = member(&g, &spec, &mut ctx.budget)?;
    let violation = m.violation.map(|v| match v {
        Violation::NegativeSubset { set, delta } => json!({
            "kind": "negative_subset",
            "set": names(&set, &g),
            "delta": rational(&delta),
        }),
        Violation::BelowControl { set, delta, bound } => json!({
            "kind": "below_control",
            "set": names(&set, &g),
            "delta": rational(&delta),
            "bound": rational(&bound),
        }),
        Violation::MuExceeded { entry, base, copies, bound } => json!({
            "kind": "mu_exceeded",
            "entry": entry + 1,
            "base": base.iter().map(|&v| g.name(v)).collect::<Vec<_>>(),
            "copies": copies.iter().map(|c| names(c, &g)).collect::<Vec<_>>(),
            "bound": bound,
        }),
    });
    Ok(obj(json!({
        "alpha": rational(&spec.alpha),
        "variant": spec.variant,
        "member": m.member,
        "violation": violation,
    })))
}

fn ramsey_cmd(ctx: &mut Ctx, b: &Path, c: &Path, r: usize) -> Outcome<Body> {
    let b = ctx.graph(b)?;
    let c = ctx.graph(c)?;
    let cert = non_ramsey_certificate(&b, &c, r, &mut ctx.budget)?;
    let (search, coloring) = match &cert.search {
        SearchStatus::NotRun => ("not_run", None),
        SearchStatus::Found(col) => (
            "found",
            Some(
                col.iter()
                    .enumerate()
                    .map(|(v, &k)| (c.name(v).to_string(), json!(k + 1)))
                    .collect::<Map<_, _>>(),
            ),
        ),
        SearchStatus::Exhausted => ("exhausted", None),
        SearchStatus::BudgetExceeded => {
            ctx.exhausted = true;
            ("budget_exceeded", None)
        }
    };
    Ok(obj(json!({
        "r": cert.r,
        "m_c": rational(&cert.m_c),
        "eta_star_b": cert.eta_star_b,
        "bound": rational(&cert.bound),
        "refuted": cert.verdict == RamseyVerdict::Refuted,
        "search": search,
        "bad_coloring": coloring,
    })))
}

fn one_point_cmd(ctx: &mut Ctx, a: Option<&str>, spec: Option<&Path>, n: usize, r: usize, ordered: bool) -> Outcome<Body> {
    let spec = class_spec(ctx, spec, a)?;
    let rep = one_point_refutation(&spec, n, r, ordered, &mut ctx.budget)?;
    Ok(obj(json!({
        "alpha": rational(&rep.alpha),
        "n": n,
        "r": rep.r,
        "ordered": rep.ordered,
        "cycle": graph_value(&rep.cycle),
        "in_class": rep.in_class,
        "vertices_closed": rep.vertices_closed,
        "eta_star": rep.eta_star,
        "bound": rational(&rep.bound),
        "valid": rep.valid,
    })))
}

fn convex_cmd(ctx: &mut Ctx, path: &Path, t: &str) -> Outcome<Body> {
    let y = ctx.matrix(path)?;
    let threshold = smoothclass::parse_rational(t)?;
    let v = decide_convex_ramsey(&y, &threshold)?;
    let certificate = match &v.dual {
        Some(d) => json!({
            "kind": "dual",
            "weights": d.weights.iter().map(|(j, k, l)| json!({ "plus": j + 1, "minus": k + 1, "mass": rational(l) })).collect::<Vec<_>>(),
            "combined": d.combined.iter().map(rational).collect::<Vec<_>>(),
            "row_values": d.row_values.iter().map(rational).collect::<Vec<_>>(),
            "bound": rational(&d.bound),
        }),
        None => json!({
            "kind": "primal",
            "r": v.optimal_r.entries().iter().map(rational).collect::<Vec<_>>(),
        }),
    };
    let explanation = v.dual.as_ref().map(|d| d.explanation(&threshold)).unwrap_or_default();
    Ok(obj(json!({
        "rows": y.row_count(),
        "cols": y.col_count(),
        "threshold": rational(&threshold),
        "feasible": v.feasible,
        "worst_value": rational(&v.worst_value),
        "optimal_r": v.optimal_r.entries().iter().map(rational).collect::<Vec<_>>(),
        "method": match v.method {
            DecisionMethod::Lp => "lp",
            DecisionMethod::ConstantColumns => "constant_columns",
        },
        "certificate": certificate,
        "explanation": explanation,
    })))
}

fn classify_cmd(ctx: &mut Ctx, rows: usize, cols: usize, t: &str) -> Outcome<Body> {
    let threshold = smoothclass::parse_rational(t)?;
    let s = classify_all(rows, cols, &threshold, &mut ctx.budget)?;
    if s.partial {
        ctx.exhausted = true;
    }
    Ok(obj(json!({
        "rows": s.rows,
        "cols": s.cols,
        "threshold": rational(&threshold),
        "total": s.total,
        "examined": s.examined,
        "feasible": s.feasible,
        "infeasible": s.infeasible,
        "partial": s.partial,
        "infeasible_classes": s.infeasible_classes.iter().map(matrix_rows).collect::<Vec<_>>(),
    })))
}

fn copy_value(e: &Embedding, pattern: &Graph, host: &Graph) -> Value {
    let map: Map<String, Value> = e
        .map
        .iter()
        .enumerate()
        .map(|(p, &h)| (pattern.name(p).to_string(), json!(host.name(h))))
        .collect();
    json!({ "image": names(&e.image, host), "map": map })
}

fn embeddings_cmd(ctx: &mut Ctx, pattern: &Path, window: &Path, a: &str) -> Outcome<Body> {
    let p = ctx.graph(pattern)?;
    let w = ctx.graph(window)?;
    let alpha = alpha(a)?;
    let set = closed_embeddings(&p, &w, &alpha, &mut ctx.budget)?;
    Ok(obj(json!({
        "alpha": rational(&alpha),
        "examined": set.examined,
        "count": set.copies.len(),
        "copies": set.copies.iter().map(|e| copy_value(e, &p, &w)).collect::<Vec<_>>(),
    })))
}

struct Pair {
    a: Graph,
    b: Graph,
    window: Graph,
    alpha: smoothclass::Rational,
}

fn load_pair(ctx: &mut Ctx, args: &PairArgs) -> Outcome<Pair> {
    Ok(Pair {
        a: ctx.graph(&args.a)?,
        b: ctx.graph(&args.b)?,
        window: ctx.graph(&args.window)?,
        alpha: alpha(&args.alpha)?,
    })
}

fn treepair_cmd(ctx: &mut Ctx, args: &PairArgs) -> Outcome<Body> {
    let p = load_pair(ctx, args)?;
    let v = is_tree_pair_window(&p.a, &p.b, &p.window, &p.alpha, &mut ctx.budget)?;
    let w = &p.window;
    let violation = v.violation.as_ref().map(|x| match x {
        TreePairViolation::SharedTwice { copies, shared } => json!({
            "kind": "shared_twice",
            "copies": [copies.0 + 1, copies.1 + 1],
            "shared": shared.iter().map(|s| names(s, w)).collect::<Vec<_>>(),
        }),
        TreePairViolation::Cycle(c) => json!({
            "kind": "cycle",
            "length": c.len(),
            "copies": c.copies.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "connectors": c.connectors.iter().map(|s| names(s, w)).collect::<Vec<_>>(),
        }),
    });
    let edges: Vec<Value> = v
        .graph
        .shared
        .iter()
        .map(|(&(i, j), s)| {
            json!({
                "copies": [i + 1, j + 1],
                "shared": s.iter().map(|&k| names(&v.graph.a_copies[k], w)).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(obj(json!({
        "alpha": rational(&p.alpha),
        "tree_pair": v.tree_pair,
        "violation": violation,
        "b_copies": v.b_copies.iter().map(|e| names(&e.image, w)).collect::<Vec<_>>(),
        "a_copies": v.a_copies.iter().map(|e| names(&e.image, w)).collect::<Vec<_>>(),
        "component_graph": {
            "edges": edges,
            "components": v.graph.component_count(),
            "component": v.graph.component.iter().map(|c| c + 1).collect::<Vec<_>>(),
        },
        "component_deltas": v.component_deltas.iter().map(rational).collect::<Vec<_>>(),
    })))
}

fn color_cmd(ctx: &mut Ctx, matrix: &Path, args: &PairArgs, root_row: usize, root_copy: usize) -> Outcome<Body> {
    let y = ctx.matrix(matrix)?;
    let p = load_pair(ctx, args)?;
    let root_row = one_based(root_row, "--root-row")?;
    let root_copy = one_based(root_copy, "--root-copy")?;
    let v = is_tree_pair_window(&p.a, &p.b, &p.window, &p.alpha, &mut ctx.budget)?;
    if let Some(x) = &v.violation {
        let what = match x {
            TreePairViolation::SharedTwice { .. } => "two copies of B share more than one closed copy of A",
            TreePairViolation::Cycle(_) => "the copies of B form a cycle",
        };
        return Err(input_error(format!("not a tree-pair window: {what}")));
    }
    let mut row_enum: Vec<VertexSet> = Vec::new();
    for e in enumerate_copies(&p.a, &p.b)? {
        if closed_in_host(&e.image, &p.b, &p.alpha)? && !row_enum.contains(&e.image) {
            row_enum.push(e.image);
        }
    }
    let mut b_copies = v.b_copies.clone();
    if root_copy >= b_copies.len() {
        return Err(input_error(format!("--root-copy {} out of range: {} closed copies of B", root_copy + 1, b_copies.len())));
    }
    let root = b_copies.remove(root_copy);
    b_copies.insert(0, root);
    let images: Vec<VertexSet> = b_copies.iter().map(|e| e.image.clone()).collect();
    let a_images: Vec<VertexSet> = v.a_copies.iter().map(|e| e.image.clone()).collect();
    let cg = build_component_graph(&images, &a_images);
    let f = build_coloring(&y, &cg, &b_copies, &row_enum, root_row)?;
    let full = full_coloring_matrix(&f, &b_copies, &row_enum)?;
    let w = &p.window;
    Ok(obj(json!({
        "alpha": rational(&p.alpha),
        "positions": row_enum.iter().map(|s| names(s, &p.b)).collect::<Vec<_>>(),
        "b_copies": b_copies.iter().map(|e| names(&e.image, w)).collect::<Vec<_>>(),
        "coloring": f.iter().map(|(s, c)| json!({ "copy": names(s, w), "color": c })).collect::<Vec<_>>(),
        "full_coloring_matrix": matrix_rows(&full),
        "matches_matrix_rows": full.sorted() == y.sorted(),
    })))
}

fn bundle(reduced: bool) -> WitnessBundle {
    if reduced {
        build_reduced_witness()
    } else {
        build_witness()
    }
}

fn witness_build(out: &Path, reduced: bool) -> Outcome<Body> {
    let w = bundle(reduced);
    fs::create_dir_all(out).map_err(|e| input_error(format!("cannot create {}: {e}", out.display())))?;
    let meta = json!({
        "alpha": rational(&w.alpha),
        "reduced": reduced,
        "vertices": w.b.vertex_count(),
        "edges": w.b.edge_count(),
        "delta_b": rational(&delta_of(&w.b, &w.b.all_vertices(), &w.alpha)),
        "triangles": w.triangles.iter().map(|t| names(t, &w.b)).collect::<Vec<_>>(),
        "blocks": w.blocks.iter().map(|b| json!({
            "u": [b.u.0, b.u.1],
            "zeta": b.zeta,
            "length": b.length,
        })).collect::<Vec<_>>(),
    });
    let files = [("A.json", graph_value(&w.a)), ("B.json", graph_value(&w.b)), ("metadata.json", meta.clone())];
    let mut written = Vec::new();
    for (file, v) in &files {
        let path = out.join(file);
        write_json(&path, v)?;
        written.push(path.display().to_string());
    }
    Ok(obj(json!({ "written": written, "metadata": meta })))
}

fn witness_verify(ctx: &mut Ctx, reduced: bool) -> Outcome<Body> {
    let w = bundle(reduced);
    let rep = verify_claims(&w, &mut ctx.budget);
    if rep.checks.iter().any(|c| c.status == ClaimStatus::BudgetExhausted) {
        ctx.exhausted = true;
    }
    let claims: Vec<Value> = rep
        .checks
        .iter()
        .map(|c| {
            json!({
                "claim": c.claim,
                "status": match c.status {
                    ClaimStatus::Pass => "pass",
                    ClaimStatus::Fail => "fail",
                    ClaimStatus::BudgetExhausted => "budget_exhausted",
                },
                "detail": c.detail,
            })
        })
        .collect();
    Ok(obj(json!({
        "reduced": reduced,
        "vertices": w.b.vertex_count(),
        "all_pass": rep.all_pass(),
        "claims": claims,
    })))
}

fn parse_step(s: &str) -> Outcome<(usize, usize, usize)> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || input_error(format!("--extend expects HOST:T:U, got {s:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let mut out = [0usize; 3];
    for (slot, p) in out.iter_mut().zip(&parts) {
        let k: usize = p.trim().parse().map_err(|_| bad())?;
        *slot = k.checked_sub(1).ok_or_else(bad)?;
    }
    Ok((out[0], out[1], out[2]))
}

fn witness_window(out: &Path, reduced: bool, steps: &[String]) -> Outcome<Body> {
    let w = bundle(reduced);
    let mut window = WitnessWindow::single(&w);
    for (k, s) in steps.iter().enumerate() {
        let (host, t, u) = parse_step(s)?;
        window = window.extend(&w, host, t, u, &format!("w{}:", k + 2))?;
    }
    write_json(out, &graph_value(&window.graph))?;
    Ok(obj(json!({
        "reduced": reduced,
        "written": out.display().to_string(),
        "vertices": window.graph.vertex_count(),
        "edges": window.graph.edge_count(),
        "copies": window.copies.len(),
        "delta": rational(&delta_of(&window.graph, &window.graph.all_vertices(), &w.alpha)),
    })))
}

fn zero_min_build(ctx: &mut Ctx, base: &Path, m: usize, out: Option<&Path>) -> Outcome<Body> {
    let a = ctx.graph(base)?;
    let z = build_zero_min_witness(&a, m)?;
    let two = alpha("2")?;
    let class = classify_zero_algebraic(&z.cycle, &z.base, &z.graph, &two)?;
    if let Some(path) = out {
        write_json(path, &graph_value(&z.graph))?;
    }
    Ok(obj(json!({
        "alpha": rational(&two),
        "m": m,
        "graph": graph_value(&z.graph),
        "base": names(&z.base, &z.graph),
        "cycle": names(&z.cycle, &z.graph),
        "classification": class,
    })))
}

fn zero_min_classify(ctx: &mut Ctx, host: &Path, s: &str, over: &str, a: &str) -> Outcome<Body> {
    let g = ctx.graph(host)?;
    let alpha = alpha(a)?;
    let b = set(&g, s)?;
    let base = set(&g, over)?;
    let class = classify_zero_algebraic(&b, &base, &g, &alpha)?;
    Ok(obj(json!({
        "alpha": rational(&alpha),
        "relative_delta": rational(&relative_delta(&b, &base, &g, &alpha)?),
        "classification": class,
    })))
}
