//! Decomposition exporters: JSON (with an importer for round-trips) and DOT.
//!
//! JSON schema: `{"width": w, "root": node}` where a node is
//! `{"bag": [names...], "cover": [edge names...] | {"special": [names...]},
//! "children": [node...]}`; all name lists sorted lexicographically.

use hypertree::{Cover, DecompNode, EdgeSet, HDFragment, Hypergraph, SpecialEdge, VertexSet};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Serialize, Deserialize)]
struct JsonHd {
    width: usize,
    root: JsonNode,
}

#[derive(Serialize, Deserialize)]
struct JsonNode {
    bag: Vec<String>,
    cover: JsonCover,
    children: Vec<JsonNode>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JsonCover {
    Edges(Vec<String>),
    Special { special: Vec<String> },
}

fn sorted_names<I: Iterator<Item = String>>(iter: I) -> Vec<String> {
    let mut v: Vec<String> = iter.collect();
    v.sort();
    v
}

fn to_json_node(h: &Hypergraph, n: &DecompNode) -> JsonNode {
    JsonNode {
        bag: sorted_names(n.chi.iter().map(|v| h.vertex_name(v).to_string())),
        cover: match &n.cover {
            Cover::Edges(l) => {
                JsonCover::Edges(sorted_names(l.iter().map(|e| h.edge_name(e).to_string())))
            }
            Cover::Special(s) => JsonCover::Special {
                special: sorted_names(s.vertices().iter().map(|v| h.vertex_name(v).to_string())),
            },
        },
        children: n.children.iter().map(|c| to_json_node(h, c)).collect(),
    }
}

pub fn export_json(h: &Hypergraph, hd: &HDFragment) -> String {
    let doc = JsonHd {
        width: hd.width(),
        root: to_json_node(h, hd.root()),
    };
    serde_json::to_string(&doc).expect("decomposition serializes")
}

#[derive(Debug, Error)]
pub enum ImportError {
    #[error("malformed decomposition document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown vertex name '{0}'")]
    UnknownVertex(String),
    #[error("unknown edge name '{0}'")]
    UnknownEdge(String),
}

pub fn import_json(h: &Hypergraph, text: &str) -> Result<HDFragment, ImportError> {
    let doc: JsonHd = serde_json::from_str(text)?;
    let mut next_origin = 0u64;
    let root = from_json_node(h, &doc.root, &mut next_origin)?;
    Ok(HDFragment::new(root))
}

fn from_json_node(
    h: &Hypergraph,
    n: &JsonNode,
    next_origin: &mut u64,
) -> Result<DecompNode, ImportError> {
    let vertex_set = |names: &[String]| -> Result<VertexSet, ImportError> {
        let mut vs = VertexSet::new(h.vertex_count());
        for name in names {
            let id = h
                .vertex_id(name)
                .ok_or_else(|| ImportError::UnknownVertex(name.clone()))?;
            vs.insert(id);
        }
        Ok(vs)
    };
    let chi = vertex_set(&n.bag)?;
    let node = match &n.cover {
        JsonCover::Edges(names) => {
            let mut l = EdgeSet::new(h.edge_count());
            for name in names {
                let id = h
                    .edge_id(name)
                    .ok_or_else(|| ImportError::UnknownEdge(name.clone()))?;
                l.insert(id);
            }
            let children = n
                .children
                .iter()
                .map(|c| from_json_node(h, c, next_origin))
                .collect::<Result<_, _>>()?;
            DecompNode::edge_node(chi, l, children)
        }
        JsonCover::Special { special } => {
            // Origins are search-scoped and not serialized; imports take
            // fresh ones in document order.
            let s = SpecialEdge::new(vertex_set(special)?, *next_origin);
            *next_origin += 1;
            let mut node = DecompNode::special_leaf(s);
            node.chi = chi;
            node
        }
    };
    Ok(node)
}

/// Structural equality on fragments: bags, cover kinds and contents, child
/// order. Special covers compare by vertex content, since origin ids do not
/// survive export.
pub fn structurally_equal(a: &HDFragment, b: &HDFragment) -> bool {
    fn eq(a: &DecompNode, b: &DecompNode) -> bool {
        if a.chi != b.chi || a.children.len() != b.children.len() {
            return false;
        }
        let covers_match = match (&a.cover, &b.cover) {
            (Cover::Edges(x), Cover::Edges(y)) => x == y,
            (Cover::Special(x), Cover::Special(y)) => x.vertices() == y.vertices(),
            _ => false,
        };
        covers_match && a.children.iter().zip(&b.children).all(|(x, y)| eq(x, y))
    }
    a.width() == b.width() && eq(a.root(), b.root())
}

/// DOT rendering: one graph node per decomposition node labeled with its λ
/// and χ, tree edges only.
pub fn export_dot(h: &Hypergraph, hd: &HDFragment) -> String {
    fn escape(s: &str) -> String {
        s.replace('\\', "\\\\").replace('"', "\\\"")
    }
    fn label(h: &Hypergraph, n: &DecompNode) -> String {
        let lambda = match &n.cover {
            Cover::Edges(l) => {
                let names: Vec<&str> = l.iter().map(|e| h.edge_name(e)).collect();
                names.join(",")
            }
            Cover::Special(s) => {
                let names: Vec<&str> = s.vertices().iter().map(|v| h.vertex_name(v)).collect();
                format!("special({})", names.join(","))
            }
        };
        let chi: Vec<&str> = n.chi.iter().map(|v| h.vertex_name(v)).collect();
        format!("λ: {{{}}}\\nχ: {{{}}}", escape(&lambda), escape(&chi.join(",")))
    }

    let mut out = String::from("digraph hd {\n");
    let mut counter = 0usize;
    fn walk(
        h: &Hypergraph,
        n: &DecompNode,
        counter: &mut usize,
        out: &mut String,
    ) -> usize {
        let id = *counter;
        *counter += 1;
        out.push_str(&format!("  n{} [label=\"{}\"];\n", id, label(h, n)));
        for c in &n.children {
            let cid = walk(h, c, counter, out);
            out.push_str(&format!("  n{id} -> n{cid};\n"));
        }
        id
    }
    walk(h, hd.root(), &mut counter, &mut out);
    out.push_str("}\n");
    out
}
