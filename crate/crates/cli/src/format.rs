//! File formats: the graph JSON schema, bound certificates, and DOT export.

use anyhow::{anyhow, bail, Context, Result};
use mothergraph::electric::WeightedGraph;
use mothergraph::mothercuts::TheoremReport;
use mothergraph::schreier::Network;
use mothergraph::Rat;
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize)]
pub struct GraphJson {
    pub shape: Vec<u32>,
    pub d: i32,
    pub n: usize,
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Serialize, Deserialize)]
pub struct VertexJson {
    pub word: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pos: Option<u64>,
}

#[derive(Serialize, Deserialize)]
pub struct EdgeJson {
    pub u: usize,
    pub v: usize,
    #[serde(rename = "type")]
    pub edge_type: i32,
    pub conductance: String,
}

pub fn rat_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn graph_to_json(net: &Network) -> GraphJson {
    GraphJson {
        shape: net.shape.entries().to_vec(),
        d: net.degree,
        n: net.level,
        vertices: net
            .vertices
            .iter()
            .map(|w| VertexJson { word: w.to_string(), pos: w.linear_position().ok() })
            .collect(),
        edges: net
            .edges
            .iter()
            .map(|e| EdgeJson {
                u: e.u,
                v: e.v,
                edge_type: e.edge_type,
                conductance: rat_string(&e.conductance),
            })
            .collect(),
    }
}

/// A loaded graph: the weighted edges plus each vertex's linear position
/// (falling back to the vertex index when positions are absent).
pub struct LoadedGraph {
    pub graph: WeightedGraph,
    pub positions: Vec<u64>,
}

pub fn graph_from_json(g: &GraphJson) -> Result<LoadedGraph> {
    let n = g.vertices.len();
    let mut edges = Vec::with_capacity(g.edges.len());
    for e in &g.edges {
        if e.u >= n || e.v >= n {
            bail!("edge ({}, {}) out of range for {} vertices", e.u, e.v, n);
        }
        let c: Rat = e
            .conductance
            .parse()
            .map_err(|_| anyhow!("bad conductance {:?}", e.conductance))?;
        edges.push((e.u, e.v, c));
    }
    let positions = g
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| v.pos.unwrap_or(i as u64))
        .collect();
    Ok(LoadedGraph { graph: WeightedGraph::new(n, edges), positions })
}

pub fn load_graph(path: &std::path::Path) -> Result<(GraphJson, LoadedGraph)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let json: GraphJson = serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", path.display()))?;
    let loaded = graph_from_json(&json)?;
    Ok((json, loaded))
}

fn type_color(t: i32) -> &'static str {
    match t {
        -1 => "black",
        0 => "red",
        1 => "blue",
        2 => "green",
        _ => "gray",
    }
}

/// DOT export; vertices are listed left to right along the linear order.
pub fn graph_to_dot(net: &Network) -> String {
    let mut order: Vec<usize> = (0..net.vertices.len()).collect();
    if let Ok(pos) = net.linear_positions() {
        order.sort_by_key(|&v| pos[v]);
    }
    let mut out = String::from("graph {\n  rankdir=LR;\n  node [shape=plaintext];\n");
    for v in order {
        out.push_str(&format!("  v{v} [label=\"{}\"];\n", net.word(v)));
    }
    for e in &net.edges {
        out.push_str(&format!(
            "  v{} -- v{} [color={}, label=\"{}\"];\n",
            e.u,
            e.v,
            type_color(e.edge_type),
            rat_string(&e.conductance)
        ));
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize)]
pub struct CertificateJson {
    pub d: i32,
    pub shape: Vec<u32>,
    pub s: u32,
    pub t: u32,
    pub n: usize,
    pub bound: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub res: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    pub cutsets: Vec<CertCutsetJson>,
    pub allocation: Vec<CertAllocationJson>,
}

#[derive(Serialize)]
pub struct CertCutsetJson {
    pub a_hat: u64,
    pub size: usize,
    pub conductance: String,
    pub asymptotic: f64,
    pub edges: Vec<usize>,
}

#[derive(Serialize)]
pub struct CertAllocationJson {
    pub edge: usize,
    pub a_hat: u64,
    pub resistance: String,
}

pub fn certificate_json(shape: &[u32], report: &TheoremReport) -> CertificateJson {
    use mothergraph::mothercuts::SolverOutcome;
    use mothergraph::electric::Resistance;
    let res = report.solver.as_ref().map(|s| match s {
        SolverOutcome::Exact(Resistance::Finite(r)) => rat_string(r),
        SolverOutcome::Exact(Resistance::Infinite) => "inf".into(),
        SolverOutcome::Float(f) => format!("{}", f.value),
    });
    let labels: Vec<u64> = report.cutsets.iter().map(|c| c.label.unwrap()).collect();
    CertificateJson {
        d: report.degree,
        shape: shape.to_vec(),
        s: report.s,
        t: report.t,
        n: report.level,
        bound: rat_string(&report.bound),
        res,
        ratio: report.gap_ratio(),
        cutsets: report
            .rows
            .iter()
            .zip(&report.cutsets)
            .map(|(row, cs)| CertCutsetJson {
                a_hat: row.a_hat,
                size: row.size,
                conductance: rat_string(&row.exact),
                asymptotic: row.asymptotic,
                edges: cs.edges.iter().copied().collect(),
            })
            .collect(),
        allocation: report
            .allocation
            .entries
            .iter()
            .map(|(&(edge, id), r)| CertAllocationJson {
                edge,
                a_hat: labels[id],
                resistance: rat_string(r),
            })
            .collect(),
    }
}

/// Per-cutset CSV of a theorem-bound run.
pub fn conductance_csv(report: &TheoremReport) -> String {
    let mut out = String::from("a_hat,size,conductance,asymptotic,ratio\n");
    for row in &report.rows {
        use num_traits::ToPrimitive;
        let exact = row.exact.to_f64().unwrap();
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.a_hat,
            row.size,
            rat_string(&row.exact),
            row.asymptotic,
            exact / row.asymptotic
        ));
    }
    out
}

pub fn write_output(path: Option<&std::path::Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, content).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}
