use std::fmt::Write as _;
use std::path::Path;

use graph_hodge::expr::Expr;
use graph_hodge::infinite::{self, InfiniteError, LineFamily, Verdict, WindowFunction};
use graph_hodge::operators;
use graph_hodge::spectra::{self, Form, SpectrumReport};
use graph_hodge::topology::{circuit_rank, connected_components, cycle_basis, spanning_forest, Direction};
use graph_hodge::WeightedGraph;
use serde_json::{json, Value};

use crate::failure::Failure;
use crate::{FamilyCmd, FormSel, Report};

fn load_graph(path: &Path) -> Result<WeightedGraph, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    WeightedGraph::from_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn ok(json: Value, table: String) -> Report {
    Report {
        json,
        table,
        csv: None,
        status: 0,
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn edge_label(g: &WeightedGraph, e: usize) -> String {
    let edge = g.edge(e);
    format!("({},{})", g.vertex_id(edge.tail), g.vertex_id(edge.head))
}

pub fn spectra(path: &Path, sel: FormSel, tol: f64) -> Result<Report, Failure> {
    let g = load_graph(path)?;
    let forms: &[Form] = match sel {
        FormSel::Vertex => &[Form::Vertex],
        FormSel::Edge => &[Form::Edge],
        FormSel::Both => &[Form::Vertex, Form::Edge],
    };
    let mut json = serde_json::Map::new();
    let mut table = String::new();
    let mut csv = String::from("form,index,eigenvalue\n");
    for &form in forms {
        let report: SpectrumReport = spectra::laplacian_spectrum(&g, form, tol)?;
        let name = format!("delta{}", form.degree());
        writeln!(table, "Δ{}: {}", if form == Form::Vertex { "₀" } else { "₁" }, report.summary()).unwrap();
        table.push_str(&report.to_table());
        table.push('\n');
        for (i, x) in report.eigenvalues.iter().enumerate() {
            writeln!(csv, "{},{i},{x}", form.degree()).unwrap();
        }
        json.insert(name, to_value(&report));
    }
    json.insert("tolerance".into(), json!(tol));
    Ok(Report {
        json: Value::Object(json),
        table,
        csv: Some(csv),
        status: 0,
    })
}

pub fn verify(path: &Path, tol: f64) -> Result<Report, Failure> {
    let g = load_graph(path)?;
    let report = spectra::verify_coincidence(&g, tol)?;
    Ok(Report {
        json: to_value(&report),
        table: report.to_table(),
        csv: None,
        status: if report.verdict { 0 } else { 1 },
    })
}

pub fn rank(path: &Path) -> Result<Report, Failure> {
    let g = load_graph(path)?;
    let comps = connected_components(&g);
    let forest = spanning_forest(&g);
    let cycles = cycle_basis(&g);
    let rank = circuit_rank(&g);
    let mut table = format!(
        "vertices {}  edges {}  components {}  circuit rank {}\n",
        g.num_vertices(),
        g.num_edges(),
        comps.count,
        rank
    );
    let tree: Vec<String> = forest.tree_edges.iter().map(|&e| edge_label(&g, e)).collect();
    writeln!(table, "tree edges: {}", tree.join(" ")).unwrap();
    let mut cycle_json = Vec::new();
    for (i, c) in cycles.iter().enumerate() {
        let ids: Vec<&str> = c.vertices(&g).iter().map(|&v| g.vertex_id(v)).collect();
        writeln!(table, "cycle {}: {}", i + 1, ids.join(" -> ")).unwrap();
        let steps: Vec<Value> = c
            .steps
            .iter()
            .map(|&(e, dir)| json!({"edge": e, "forward": dir == Direction::Forward}))
            .collect();
        cycle_json.push(json!({"vertices": ids, "steps": steps}));
    }
    let json = json!({
        "vertices": g.num_vertices(),
        "edges": g.num_edges(),
        "components": comps.count,
        "circuit_rank": rank,
        "tree_edges": forest.tree_edges,
        "chords": forest.chords,
        "cycles": cycle_json,
    });
    Ok(ok(json, table))
}

pub fn harmonic(path: &Path) -> Result<Report, Failure> {
    let g = load_graph(path)?;
    let mut table = String::new();
    let mut forms = Vec::new();
    for (i, c) in cycle_basis(&g).iter().enumerate() {
        let phi = spectra::harmonic_cycle_form(&g, c)?;
        let residual = operators::norm_edge(&g, &operators::laplacian1_apply(&g, &phi)?)?
            / operators::norm_edge(&g, &phi)?;
        let support: Vec<Value> = c
            .steps
            .iter()
            .map(|&(e, _)| json!({"edge": edge_label(&g, e), "value": phi.values[e]}))
            .collect();
        write!(table, "form {}: residual ‖Δ₁φ‖/‖φ‖ = {residual:.3e}\n ", i + 1).unwrap();
        for &(e, _) in &c.steps {
            write!(table, " {}={:.6}", edge_label(&g, e), phi.values[e]).unwrap();
        }
        table.push('\n');
        forms.push(json!({"values": phi.values, "support": support, "residual": residual}));
    }
    if forms.is_empty() {
        table.push_str("no cycles: the graph is a forest and Δ₁ has trivial kernel\n");
    }
    Ok(ok(json!({"forms": forms}), table))
}

pub struct FamilyArgs {
    pub family: String,
    pub cmd: FamilyCmd,
    pub n: usize,
    pub alpha: Option<f64>,
    pub phi0: Option<f64>,
    pub witness: Option<String>,
    pub lambda: Option<f64>,
    pub tol: f64,
}

fn load_family(name: &str, alpha: Option<f64>) -> Result<LineFamily, Failure> {
    match LineFamily::builtin(name, alpha) {
        Err(InfiniteError::UnknownFamily(_)) if Path::new(name).is_file() => {
            let text = std::fs::read_to_string(name)
                .map_err(|e| Failure::Input(format!("cannot read {name}: {e}")))?;
            let constants: Vec<(&str, f64)> = alpha.map(|a| ("alpha", a)).into_iter().collect();
            Ok(LineFamily::from_json(&text, &constants)?)
        }
        other => Ok(other?),
    }
}

pub fn family(args: &FamilyArgs) -> Result<Report, Failure> {
    let fam = load_family(&args.family, args.alpha)?;
    let n = args.n;
    if n < 1 {
        return Err(Failure::Input("-N must be at least 1".into()));
    }
    match args.cmd {
        FamilyCmd::Gap => {
            let gap = infinite::dirichlet_gap(&fam, n, args.tol)?;
            let table = format!(
                "{}  N = {n}\nDirichlet gap (min Rayleigh quotient over window-supported f): {gap:.12}\n",
                fam.name
            );
            Ok(ok(
                json!({"family": fam.name, "radius": n, "gap": gap, "tolerance": args.tol}),
                table,
            ))
        }
        FamilyCmd::Cert => {
            let witness = match (&args.witness, fam.name.as_str()) {
                (Some(src), _) => {
                    let constants: Vec<(&str, f64)> = args.alpha.map(|a| ("alpha", a)).into_iter().collect();
                    Expr::parse_with(src, &constants).map_err(|e| Failure::Input(e.to_string()))?
                }
                (None, "G1") => infinite::g1_witness(),
                (None, name) if name.starts_with("exponential") => {
                    infinite::exponential_witness(args.alpha.expect("exponential has alpha"))
                }
                (None, name) => {
                    return Err(Failure::Input(format!("{name} has no default witness; pass --witness")))
                }
            };
            let cert = infinite::gap_certificate(&fam, &witness, n)?;
            let gap = infinite::dirichlet_gap(&fam, n.max(2), args.tol)?;
            let table = format!(
                "{}  N = {n}\nwitness A(n,n+1) = {}\nmin increment a = {:.12} at n = {}\nbound a²/4 = {:.12}\nDirichlet gap = {gap:.12} (≥ bound: {})\n",
                fam.name,
                cert.witness,
                cert.a,
                cert.argmin,
                cert.bound,
                gap >= cert.bound
            );
            let status = if gap >= cert.bound - 1e-10 { 0 } else { 1 };
            let mut json = to_value(&cert);
            json["dirichlet_gap"] = json!(gap);
            Ok(Report {
                json,
                table,
                csv: None,
                status,
            })
        }
        FamilyCmd::Chi => {
            let cert = infinite::chi_certificate(&fam, (1, n as u64), 4)?;
            let mut table = format!("{}  n = 1..{n}, |x| ≤ 4(n+1)\n{:>6} {:>14} {:>8}\n", fam.name, "n", "sup", "at x");
            for r in &cert.rows {
                writeln!(table, "{:>6} {:>14.8} {:>8}", r.n, r.sup, r.argmax).unwrap();
            }
            writeln!(table, "C = {:.8}  cutoff conditions hold: {}", cert.constant, cert.cutoff_conditions_hold).unwrap();
            Ok(ok(to_value(&cert), table))
        }
        FamilyCmd::Bgj => {
            let r = infinite::bgj_series(&fam, n, (n / 10).max(1))?;
            let mut table = format!("{}  Σ_(n=2)^N 1/√(a_n⁺ + a_(n+1)⁻)\n", fam.name);
            for (k, s) in &r.partial_sums {
                writeln!(table, "N = {k:>10}  {s:.10}").unwrap();
            }
            writeln!(table, "tail exponent {:.4}, verdict {}", r.tail.exponent, r.verdict).unwrap();
            Ok(ok(to_value(&r), table))
        }
        FamilyCmd::Kerdelta => {
            let r = infinite::ker_delta_criterion(&fam, n, (n / 10).max(1))?;
            let statement = match r.verdict {
                Verdict::Convergent => "0 is an eigenvalue of Δ₁",
                Verdict::Divergent => "0 is not an eigenvalue of Δ₁",
                Verdict::Inconclusive => "no conclusion about 0 in σ(Δ₁)",
            };
            let mut table = format!("{}  S_N = Σ_(n=-N)^(N-1) 1/c(n,n+1)\n", fam.name);
            for (k, s) in &r.partial_sums {
                writeln!(table, "N = {k:>10}  {s:.12}").unwrap();
            }
            writeln!(
                table,
                "tail: max ratio {:.6}, exponent {:.4}\nverdict: {} ({statement})",
                r.tail.max_ratio, r.tail.exponent, r.verdict
            )
            .unwrap();
            let mut json = to_value(&r);
            json["statement"] = json!(statement);
            Ok(ok(json, table))
        }
        FamilyCmd::Harmonic => {
            let phi0 = match args.phi0 {
                Some(p) => p,
                None => 1.0 / fam.conductance(0).map_err(Failure::from)?,
            };
            let form = infinite::harmonic_line_form(&fam, n, phi0)?;
            let table = format!(
                "{}  N = {n}\nφ(0,1) = {phi0}, flux a = {}\nΣ c φ² over window = {:.12}\ninterior residual (relative) = {:.3e}\n",
                fam.name, form.flux, form.partial_norm_sq, form.interior_residual
            );
            let mut json = to_value(&form);
            if n > 5000 {
                json.as_object_mut().unwrap().remove("values");
            }
            Ok(ok(json, table))
        }
        FamilyCmd::Weyl => weyl(&fam, n, args.lambda),
        FamilyCmd::G2basis => {
            if fam.name != "G2" {
                return Err(Failure::Precondition(format!("g2basis applies to G2, not {}", fam.name)));
            }
            let basis = infinite::g2_harmonic_basis(n)?;
            let g = &basis.truncation.graph;
            let sym = spectra::symmetric_laplacian(g, Form::Edge)?;
            let kernel = spectra::kernel_dim(&sym.matrix, args.tol)?;
            let mut table = format!("G2  N = {n}: {} forms; dim ker Δ₁ of the window = {kernel}\n", basis.forms.len());
            let mut forms = Vec::new();
            for (k, (cycle, phi)) in basis.indices.iter().zip(basis.cycles.iter().zip(&basis.forms)) {
                let support: Vec<Value> = cycle
                    .steps
                    .iter()
                    .map(|&(e, _)| json!({"edge": edge_label(g, e), "value": phi.values[e]}))
                    .collect();
                let norm_sq = operators::inner_edge(g, phi, phi)?;
                write!(table, "φ_{k}: ‖φ‖² = {norm_sq:.6}\n ").unwrap();
                for &(e, _) in &cycle.steps {
                    write!(table, " {}={:.6}", edge_label(g, e), phi.values[e]).unwrap();
                }
                table.push('\n');
                forms.push(json!({"k": k, "support": support, "norm_sq": norm_sq}));
            }
            Ok(ok(
                json!({"radius": n, "count": basis.forms.len(), "kernel_dim": kernel, "forms": forms}),
                table,
            ))
        }
        FamilyCmd::Truncate => {
            let t = fam.truncate(n)?;
            let text = t.graph.to_json();
            let json: Value = serde_json::from_str(&text).expect("graph JSON parses");
            Ok(ok(json, text + "\n"))
        }
    }
}

fn weyl(fam: &LineFamily, n: usize, lambda: Option<f64>) -> Result<Report, Failure> {
    let radii = [n, 2 * n, 4 * n];
    let mut residuals = Vec::new();
    let (space, lam) = match lambda {
        Some(lam) => {
            if !(0.0..=4.0).contains(&lam) {
                return Err(Failure::Input(format!("--lambda must lie in [0, 4], got {lam}")));
            }
            // cos(θk) solves the unit-weight recursion at λ = 2 − 2cos θ.
            let theta = (1.0 - lam / 2.0).acos();
            for &r in &radii {
                let t = fam.truncate(r + 2)?;
                let f = infinite::tent_wave(&t, r, theta);
                residuals.push(infinite::weyl_residual(&t, lam, &WindowFunction::Vertex(f))?);
            }
            ("vertex", lam)
        }
        None => {
            if fam.has_chords() {
                return Err(InfiniteError::ChordsUnsupported.into());
            }
            for &r in &radii {
                let t = fam.truncate(2 * r + 3)?;
                let phi = infinite::tapered_harmonic_form(fam, &t, r as f64, 2.0 * r as f64)?;
                residuals.push(infinite::weyl_residual(&t, 0.0, &WindowFunction::Edge(phi))?);
            }
            ("edge", 0.0)
        }
    };
    let decreasing = residuals.windows(2).all(|w| w[1] < w[0]);
    let statement = if decreasing {
        format!("residuals decrease: consistent with λ = {lam} ∈ σ(Δ)")
    } else {
        "residuals do not decrease".to_string()
    };
    let mut table = format!("{}  {space} test functions, λ = {lam}\n", fam.name);
    for (r, x) in radii.iter().zip(&residuals) {
        writeln!(table, "R = {r:>8}  ‖(Δ−λ)f‖/‖f‖ = {x:.6e}").unwrap();
    }
    writeln!(table, "{statement}").unwrap();
    Ok(ok(
        json!({
            "family": fam.name,
            "space": space,
            "lambda": lam,
            "radii": radii,
            "residuals": residuals,
            "decreasing": decreasing,
            "statement": statement,
        }),
        table,
    ))
}
