//! Component classification: strongly connected graphs, trees and fruit
//! trees.
//!
//! Fruit trees are recognized twice, once through the four structural
//! properties (circle-shaped strong components, no edge between two of
//! them, a single attaching edge each, no fake circle) and once by building
//! the trunk/fruit decomposition directly. The two must agree.

use super::{
    acyclic_edges, alternating_number, polygons, reachable_from, scc_decomposition, AlternatingNumber,
    DirectedMultigraph, Polygon,
};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FruitProperty {
    /// Every maximal strong component is a vertex graph or an n-circle.
    SccShape,
    /// No edge joins two nontrivial strong components.
    SccAdjacency,
    /// Each nontrivial strong component meets the rest by exactly one edge.
    SingleAttachment,
    /// No polygon other than directed circles.
    NoFakeCircle,
}

impl FruitProperty {
    pub fn label(self) -> &'static str {
        match self {
            FruitProperty::SccShape => "i",
            FruitProperty::SccAdjacency => "ii",
            FruitProperty::SingleAttachment => "iii",
            FruitProperty::NoFakeCircle => "iv",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Component(Vec<usize>),
    Edge(usize),
    Attachments { component: Vec<usize>, edges: Vec<usize> },
    FakeCircle(Polygon),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub property: FruitProperty,
    pub witness: Witness,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    In,
    Out,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fruit {
    /// Circle vertices starting at the attachment vertex.
    pub vertices: Vec<usize>,
    /// Circle edges; read in order they form the minimal circle at the
    /// attachment vertex.
    pub edges: Vec<usize>,
    pub attachment: usize,
    pub attaching_edge: usize,
    pub orientation: Orientation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FruitDecomposition {
    pub trunk_vertices: Vec<usize>,
    pub trunk_edges: Vec<usize>,
    pub fruits: Vec<Fruit>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    VertexGraph,
    CircleGraph(usize),
    StronglyConnectedOther,
    /// A fruit tree with at least one fruit.
    FruitTree,
    /// A fruit tree without fruit.
    Tree,
    NotFruitTree(Violation),
    Unknown(String),
}

impl Verdict {
    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::VertexGraph => "VertexGraph",
            Verdict::CircleGraph(_) => "CircleGraph",
            Verdict::StronglyConnectedOther => "StronglyConnectedOther",
            Verdict::FruitTree => "FruitTree",
            Verdict::Tree => "Tree",
            Verdict::NotFruitTree(_) => "NotFruitTree",
            Verdict::Unknown(_) => "Unknown",
        }
    }

    pub fn is_strongly_connected(&self) -> bool {
        matches!(self, Verdict::VertexGraph | Verdict::CircleGraph(_) | Verdict::StronglyConnectedOther)
    }

    pub fn is_fruit_tree(&self) -> bool {
        matches!(self, Verdict::FruitTree | Verdict::Tree)
    }
}

#[derive(Clone, Debug)]
pub struct ComponentReport {
    /// The component as a graph of its own; ids match the parent graph.
    pub graph: DirectedMultigraph,
    /// Parent indices of the component's vertices and edges.
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
    pub verdict: Verdict,
    pub decomposition: Option<FruitDecomposition>,
    /// `None` when the line budget ran out (reported as infinite).
    pub alternating: Option<AlternatingNumber>,
    pub acyclic_edges: Vec<usize>,
    pub fake_circle: Option<Polygon>,
}

#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub components: Vec<ComponentReport>,
}

impl ClassificationReport {
    pub fn all_trivial(&self) -> bool {
        self.components.iter().all(|c| c.verdict.is_strongly_connected() || c.verdict.is_fruit_tree())
    }
}

fn is_nontrivial(g: &DirectedMultigraph, comp: &[usize]) -> bool {
    comp.len() > 1 || g.out_edges(comp[0]).iter().any(|&e| g.range(e) == comp[0])
}

/// True when `g` itself is an n-circle graph.
pub(crate) fn is_circle_graph(g: &DirectedMultigraph) -> bool {
    let n = g.vertex_count();
    n >= 1
        && g.edge_count() == n
        && (0..n).all(|v| g.out_edges(v).len() == 1 && g.in_edges(v).len() == 1)
        && scc_decomposition(g).len() == 1
}

/// The first of the four fruit-tree properties that fails, if any.
pub fn check_fruit_properties(g: &DirectedMultigraph, budget: usize) -> Result<Option<Violation>> {
    let sccs = scc_decomposition(g);
    let mut comp_of = vec![0usize; g.vertex_count()];
    for (i, c) in sccs.iter().enumerate() {
        for &v in c {
            comp_of[v] = i;
        }
    }
    let nontrivial: Vec<bool> = sccs.iter().map(|c| is_nontrivial(g, c)).collect();

    for (i, c) in sccs.iter().enumerate() {
        if nontrivial[i] && !is_circle_graph(&g.induced(c).0) {
            return Ok(Some(Violation { property: FruitProperty::SccShape, witness: Witness::Component(c.clone()) }));
        }
    }
    for e in 0..g.edge_count() {
        let (a, b) = (comp_of[g.source(e)], comp_of[g.range(e)]);
        if a != b && nontrivial[a] && nontrivial[b] {
            return Ok(Some(Violation { property: FruitProperty::SccAdjacency, witness: Witness::Edge(e) }));
        }
    }
    for (i, c) in sccs.iter().enumerate() {
        if !nontrivial[i] {
            continue;
        }
        let boundary: Vec<usize> = (0..g.edge_count())
            .filter(|&e| (comp_of[g.source(e)] == i) != (comp_of[g.range(e)] == i))
            .collect();
        if boundary.len() != 1 {
            return Ok(Some(Violation {
                property: FruitProperty::SingleAttachment,
                witness: Witness::Attachments { component: c.clone(), edges: boundary },
            }));
        }
    }
    if let Some(p) = polygons(g, budget)?.into_iter().find(|p| !p.is_directed_circle(g)) {
        return Ok(Some(Violation { property: FruitProperty::NoFakeCircle, witness: Witness::FakeCircle(p) }));
    }
    Ok(None)
}

/// Builds the trunk and fruits directly: fruits are the components of the
/// edges that lie on directed circles, each must be a directed circle hung
/// on the rest by one edge, and what remains must be a tree. Returns `None`
/// when any step fails.
fn construct(g: &DirectedMultigraph) -> Option<FruitDecomposition> {
    let n = g.vertex_count();
    let reach: Vec<Vec<bool>> = (0..n).map(|v| reachable_from(g, v)).collect();
    let cyclic_edge: Vec<bool> = (0..g.edge_count()).map(|e| reach[g.range(e)][g.source(e)]).collect();
    let mut cyclic_vertex = vec![false; n];
    for e in (0..g.edge_count()).filter(|&e| cyclic_edge[e]) {
        cyclic_vertex[g.source(e)] = true;
        cyclic_vertex[g.range(e)] = true;
    }

    // group cyclic vertices along cyclic edges
    let mut group = vec![usize::MAX; n];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for v in (0..n).filter(|&v| cyclic_vertex[v]) {
        if group[v] != usize::MAX {
            continue;
        }
        let id = groups.len();
        let mut members = vec![v];
        group[v] = id;
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            i += 1;
            for &e in g.out_edges(x).iter().chain(g.in_edges(x)) {
                if !cyclic_edge[e] {
                    continue;
                }
                for y in [g.source(e), g.range(e)] {
                    if group[y] == usize::MAX {
                        group[y] = id;
                        members.push(y);
                    }
                }
            }
        }
        members.sort_unstable();
        groups.push(members);
    }

    let mut fruits = Vec::new();
    for (id, members) in groups.iter().enumerate() {
        let inner: Vec<usize> = (0..g.edge_count())
            .filter(|&e| group[g.source(e)] == id && group[g.range(e)] == id)
            .collect();
        if inner.len() != members.len() {
            return None;
        }
        let boundary: Vec<usize> = (0..g.edge_count())
            .filter(|&e| (group[g.source(e)] == id) != (group[g.range(e)] == id))
            .collect();
        let [attaching_edge] = boundary[..] else { return None };
        let (s, r) = (g.source(attaching_edge), g.range(attaching_edge));
        let (attachment, outside) = if group[s] == id { (s, r) } else { (r, s) };
        if cyclic_vertex[outside] {
            return None;
        }
        // walk the circle backwards along ranges: e1 has range v, e2 has range s(e1), ...
        let mut vertices = vec![attachment];
        let mut edges = Vec::new();
        let mut cur = attachment;
        for _ in 0..members.len() {
            let into: Vec<usize> = g.in_edges(cur).iter().copied().filter(|&e| inner.contains(&e)).collect();
            let [e] = into[..] else { return None };
            edges.push(e);
            cur = g.source(e);
            vertices.push(cur);
        }
        if cur != attachment {
            return None;
        }
        vertices.pop();
        let mut distinct = vertices.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() != members.len() {
            return None;
        }
        let orientation = if g.source(attaching_edge) == attachment { Orientation::Out } else { Orientation::In };
        fruits.push(Fruit { vertices, edges, attachment, attaching_edge, orientation });
    }

    let attachments: Vec<usize> = fruits.iter().map(|f| f.attachment).collect();
    let trunk_vertices: Vec<usize> = (0..n).filter(|&v| !cyclic_vertex[v] || attachments.contains(&v)).collect();
    let trunk_edges: Vec<usize> = (0..g.edge_count()).filter(|&e| !cyclic_edge[e]).collect();
    if trunk_vertices.len() == attachments.len() {
        return None;
    }
    if !g.edge_subgraph(&trunk_vertices, &trunk_edges).is_tree() {
        return None;
    }
    Some(FruitDecomposition { trunk_vertices, trunk_edges, fruits })
}

/// Trunk and fruits of a connected, not strongly connected graph, or the
/// first violated fruit-tree property.
pub fn fruit_tree_decomposition(
    g: &DirectedMultigraph,
    budget: usize,
) -> Result<std::result::Result<FruitDecomposition, Violation>> {
    if !g.is_connected() || g.vertex_count() < 2 {
        return Err(Error::Precondition("fruit tree decomposition needs a connected graph on ≥ 2 vertices".into()));
    }
    let built = construct(g);
    let violation = check_fruit_properties(g, budget)?;
    match (built, violation) {
        (Some(d), None) => Ok(Ok(d)),
        (None, Some(v)) => Ok(Err(v)),
        (Some(_), Some(v)) => Err(Error::Internal(format!(
            "decomposition succeeded but property ({}) fails",
            v.property.label()
        ))),
        (None, None) => Err(Error::Internal("properties hold but no decomposition was found".into())),
    }
}

/// Default budgets for the enumerations behind a report.
#[derive(Clone, Copy, Debug)]
pub struct ClassifyBudget {
    pub polygons: usize,
    pub lines: usize,
}

impl Default for ClassifyBudget {
    fn default() -> Self {
        ClassifyBudget { polygons: 1_000_000, lines: 1_000_000 }
    }
}

pub fn classify_component(g: &DirectedMultigraph, polygon_budget: usize, line_budget: usize) -> Result<ComponentReport> {
    if !g.is_connected() {
        return Err(Error::Precondition("classify_component needs a connected graph".into()));
    }
    let mut report = ComponentReport {
        graph: g.clone(),
        vertex_map: (0..g.vertex_count()).collect(),
        edge_map: (0..g.edge_count()).collect(),
        verdict: Verdict::Unknown(String::new()),
        decomposition: None,
        alternating: alternating_number(g, line_budget).ok(),
        acyclic_edges: acyclic_edges(g),
        fake_circle: None,
    };
    match polygons(g, polygon_budget) {
        Ok(ps) => report.fake_circle = ps.into_iter().find(|p| !p.is_directed_circle(g)),
        Err(e) => {
            report.verdict = Verdict::Unknown(e.to_string());
            return Ok(report);
        }
    }
    if scc_decomposition(g).len() == 1 {
        report.verdict = if g.vertex_count() == 1 && g.edge_count() == 0 {
            Verdict::VertexGraph
        } else if is_circle_graph(g) {
            Verdict::CircleGraph(g.vertex_count())
        } else {
            Verdict::StronglyConnectedOther
        };
        return Ok(report);
    }
    report.verdict = match fruit_tree_decomposition(g, polygon_budget) {
        Ok(Ok(d)) => {
            let v = if d.fruits.is_empty() { Verdict::Tree } else { Verdict::FruitTree };
            report.decomposition = Some(d);
            v
        }
        Ok(Err(v)) => Verdict::NotFruitTree(v),
        Err(Error::Budget(msg)) => Verdict::Unknown(msg),
        Err(e) => return Err(e),
    };
    Ok(report)
}

/// Classifies every connected component.
pub fn classify(g: &DirectedMultigraph, budget: ClassifyBudget) -> Result<ClassificationReport> {
    let mut components = Vec::new();
    for comp in g.components() {
        let (sub, vmap, emap) = g.induced(&comp);
        let mut r = classify_component(&sub, budget.polygons, budget.lines)?;
        r.vertex_map = vmap;
        r.edge_map = emap;
        components.push(r);
    }
    Ok(ClassificationReport { components })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{
        amalgamate, circle, free_semigroup, in_fruit_minimal, loop_and_two_edges, out_fruit_minimal, parallel_edges,
        two_loops_one_edge, upper_triangle_tree,
    };

    fn verdict(g: &DirectedMultigraph) -> Verdict {
        classify_component(g, 100_000, 100_000).unwrap().verdict
    }

    #[test]
    fn strongly_connected() {
        assert_eq!(verdict(&circle(5)), Verdict::CircleGraph(5));
        assert_eq!(verdict(&free_semigroup(2)), Verdict::StronglyConnectedOther);
        assert_eq!(verdict(&free_semigroup(1)), Verdict::CircleGraph(1));
    }

    #[test]
    fn named_fixtures() {
        match verdict(&loop_and_two_edges()) {
            Verdict::NotFruitTree(v) => {
                assert_eq!(v.property, FruitProperty::SingleAttachment);
                assert_eq!(v.witness, Witness::Attachments { component: vec![2], edges: vec![1, 2] });
            }
            other => panic!("{other:?}"),
        }
        match verdict(&two_loops_one_edge()) {
            Verdict::NotFruitTree(v) => assert_eq!(v.witness, Witness::Edge(2)),
            other => panic!("{other:?}"),
        }
        match verdict(&parallel_edges(2)) {
            Verdict::NotFruitTree(v) => assert_eq!(v.property, FruitProperty::NoFakeCircle),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn out_fruit() {
        let g = out_fruit_minimal();
        let r = classify_component(&g, 1000, 1000).unwrap();
        assert_eq!(r.verdict, Verdict::FruitTree);
        let d = r.decomposition.unwrap();
        assert_eq!(d.trunk_vertices, vec![0, 1]);
        assert_eq!(d.fruits.len(), 1);
        assert_eq!(d.fruits[0].orientation, Orientation::Out);
        assert_eq!(d.fruits[0].attachment, 1);
        let r = classify_component(&in_fruit_minimal(), 1000, 1000).unwrap();
        assert_eq!(r.decomposition.unwrap().fruits[0].orientation, Orientation::In);
    }

    #[test]
    fn plain_tree() {
        let g = upper_triangle_tree(4);
        let r = classify_component(&g, 1000, 1000).unwrap();
        assert_eq!(r.verdict, Verdict::Tree);
        let d = r.decomposition.unwrap();
        assert_eq!(d.trunk_vertices.len(), 4);
        assert!(d.fruits.is_empty());
    }

    #[test]
    fn amalgamated_fruit_tree_round_trips() {
        let g = amalgamate(&upper_triangle_tree(4), &[3, 1], &["v1", "v4"]).unwrap();
        let r = classify_component(&g, 10_000, 10_000).unwrap();
        assert_eq!(r.verdict, Verdict::FruitTree);
        let d = r.decomposition.unwrap();
        let sizes: Vec<usize> = d.fruits.iter().map(|f| f.vertices.len()).collect();
        assert_eq!(sizes, vec![3, 1]);
        let trunk = g.edge_subgraph(&d.trunk_vertices, &d.trunk_edges);
        let names: Vec<&str> = d.fruits.iter().map(|f| g.vertex_id(f.attachment)).collect();
        let again = amalgamate(&trunk, &sizes, &names).unwrap();
        assert!(crate::graph::isomorphic(&again, &g));
    }
}
