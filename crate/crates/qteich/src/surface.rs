//! Combinatorial marked surfaces: dotted ideal triangulations, elementary
//! moves (dot rotations, flips, label permutations), exchange matrices and
//! their mutation, dual graphs, corner classes around punctures and boundary
//! components, and built-in surfaces and mapping-class move words.

use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};

/// One triangle of a dotted triangulation.  Sides are listed
/// counter-clockwise; side `i` runs from corner `i` to corner `i+1 (mod 3)`,
/// and the dot sits at corner 0, so a dot rotation is a cyclic shift of the
/// side list.  The label doubles as the tensor-factor site of the state
/// space attached to the triangulation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangle {
    pub label: usize,
    pub sides: [usize; 3],
}

/// An ideal triangulation with one dotted corner per triangle.  Interior
/// edges appear on exactly two triangle sides, boundary edges on exactly
/// one; self-folded triangles (a triangle glued to itself along an edge)
/// are rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DottedTriangulation {
    triangles: Vec<Triangle>,
    boundary: BTreeSet<usize>,
}

impl DottedTriangulation {
    pub fn new(
        triangles: Vec<Triangle>,
        boundary: impl IntoIterator<Item = usize>,
    ) -> Result<DottedTriangulation> {
        let boundary: BTreeSet<usize> = boundary.into_iter().collect();
        let mut seen = BTreeSet::new();
        for t in &triangles {
            if !seen.insert(t.label) {
                return Err(Error::InvalidPath {
                    reason: format!("duplicate triangle label {}", t.label),
                });
            }
            for i in 0..3 {
                if t.sides[i] == t.sides[(i + 1) % 3] {
                    return Err(Error::SelfFolded {
                        triangle: t.label,
                        edge: t.sides[i],
                    });
                }
            }
        }
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for t in &triangles {
            for &e in &t.sides {
                *counts.entry(e).or_insert(0) += 1;
            }
        }
        for (&e, &c) in &counts {
            let expected = if boundary.contains(&e) { 1 } else { 2 };
            if c != expected {
                return Err(Error::InvalidPath {
                    reason: format!(
                        "edge {e} occurs {c} times but is {}",
                        if expected == 1 { "boundary" } else { "interior" }
                    ),
                });
            }
        }
        for &e in &boundary {
            if !counts.contains_key(&e) {
                return Err(Error::InvalidPath {
                    reason: format!("boundary edge {e} not used by any triangle"),
                });
            }
        }
        Ok(DottedTriangulation {
            triangles,
            boundary,
        })
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    /// Triangle labels in their stored order.
    pub fn labels(&self) -> Vec<usize> {
        self.triangles.iter().map(|t| t.label).collect()
    }

    pub fn triangle(&self, label: usize) -> Result<&Triangle> {
        self.triangles
            .iter()
            .find(|t| t.label == label)
            .ok_or(Error::UnknownSite { site: label })
    }

    /// All edge ids, ascending.
    pub fn edge_ids(&self) -> Vec<usize> {
        let mut ids: BTreeSet<usize> = BTreeSet::new();
        for t in &self.triangles {
            ids.extend(t.sides.iter().copied());
        }
        ids.into_iter().collect()
    }

    pub fn is_boundary(&self, edge: usize) -> bool {
        self.boundary.contains(&edge)
    }

    pub fn boundary_edges(&self) -> Vec<usize> {
        self.boundary.iter().copied().collect()
    }

    pub fn interior_edges(&self) -> Vec<usize> {
        self.edge_ids()
            .into_iter()
            .filter(|e| !self.boundary.contains(e))
            .collect()
    }

    /// The (triangle label, side index) occurrences of an edge.
    pub fn occurrences(&self, edge: usize) -> Vec<(usize, usize)> {
        let mut occ = Vec::new();
        for t in &self.triangles {
            for (i, &e) in t.sides.iter().enumerate() {
                if e == edge {
                    occ.push((t.label, i));
                }
            }
        }
        occ
    }
}

/// An elementary move of the dotted Ptolemy groupoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveKind {
    /// Move the dot of triangle `v` one corner counter-clockwise.
    DotRotation { v: usize },
    /// Flip the interior edge shared by `v` and `w`; the dot of `v` must
    /// sit opposite side position 1 and the dot of `w` opposite position 2
    /// (callers insert dot rotations to reach this configuration).
    Flip { v: usize, w: usize, edge: usize },
    /// Exchange the labels of two triangles.
    Permute { a: usize, b: usize },
}

/// A performed move together with its endpoint triangulations.
#[derive(Debug, Clone)]
pub struct ElementaryMove {
    pub kind: MoveKind,
    pub before: DottedTriangulation,
    pub after: DottedTriangulation,
}

/// Apply an elementary move, validating its preconditions.
pub fn apply_move(state: &DottedTriangulation, kind: MoveKind) -> Result<ElementaryMove> {
    let mut after = state.clone();
    match kind {
        MoveKind::DotRotation { v } => {
            state.triangle(v)?;
            for t in &mut after.triangles {
                if t.label == v {
                    t.sides = [t.sides[1], t.sides[2], t.sides[0]];
                }
            }
        }
        MoveKind::Flip { v, w, edge } => {
            state.triangle(v)?;
            state.triangle(w)?;
            if state.is_boundary(edge) {
                return Err(Error::BoundaryFlip { edge });
            }
            let occ = state.occurrences(edge);
            let find = |label: usize| occ.iter().find(|(t, _)| *t == label).map(|&(_, s)| s);
            let (s_v, s_w) = match (find(v), find(w)) {
                (Some(a), Some(b)) if v != w => (a, b),
                _ => {
                    return Err(Error::NotAdjacent {
                        edge,
                        t1: v,
                        t2: w,
                    })
                }
            };
            if s_v != 1 || s_w != 2 {
                return Err(Error::DotPositionMismatch {
                    edge,
                    t1: v,
                    t2: w,
                });
            }
            let tv = state.triangle(v)?.clone();
            let tw = state.triangle(w)?.clone();
            let (a, b) = (tv.sides[2], tv.sides[0]);
            let (c, d) = (tw.sides[0], tw.sides[1]);
            for t in &mut after.triangles {
                if t.label == v {
                    t.sides = [edge, d, a];
                } else if t.label == w {
                    t.sides = [c, edge, b];
                }
            }
        }
        MoveKind::Permute { a, b } => {
            state.triangle(a)?;
            state.triangle(b)?;
            for t in &mut after.triangles {
                if t.label == a {
                    t.label = b;
                } else if t.label == b {
                    t.label = a;
                }
            }
        }
    }
    Ok(ElementaryMove {
        kind,
        before: state.clone(),
        after,
    })
}

/// Skew-symmetric exchange matrix indexed by edge pairs.  Boundary edges
/// are carried along as frozen indices: they enter the entries but may not
/// serve as mutation directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExchangeMatrix {
    edges: Vec<usize>,
    frozen: BTreeSet<usize>,
    entries: BTreeMap<(usize, usize), i64>,
}

impl ExchangeMatrix {
    pub fn entry(&self, alpha: usize, beta: usize) -> i64 {
        *self.entries.get(&(alpha, beta)).unwrap_or(&0)
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn is_frozen(&self, edge: usize) -> bool {
        self.frozen.contains(&edge)
    }

    /// Matrix mutation at edge `κ`: entries touching `κ` flip sign, the
    /// rest pick up `[ε_{ακ}]₊[ε_{κβ}]₊ − [−ε_{ακ}]₊[−ε_{κβ}]₊`.
    pub fn mutated(&self, kappa: usize) -> ExchangeMatrix {
        let pos = |x: i64| x.max(0);
        let mut entries = BTreeMap::new();
        for &a in &self.edges {
            for &b in &self.edges {
                if a == b {
                    continue;
                }
                let e = self.entry(a, b);
                let new = if a == kappa || b == kappa {
                    -e
                } else {
                    e + pos(self.entry(a, kappa)) * pos(self.entry(kappa, b))
                        - pos(-self.entry(a, kappa)) * pos(-self.entry(kappa, b))
                };
                if new != 0 {
                    entries.insert((a, b), new);
                }
            }
        }
        ExchangeMatrix {
            edges: self.edges.clone(),
            frozen: self.frozen.clone(),
            entries,
        }
    }
}

/// Exchange matrix of a triangulation: each triangle contributes +1 for
/// every ordered pair of its sides in counter-clockwise succession and -1
/// for clockwise succession, summed over all occurrence pairs.
pub fn exchange_matrix(state: &DottedTriangulation) -> ExchangeMatrix {
    let mut entries: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    for t in state.triangles() {
        for i in 0..3 {
            let a = t.sides[i];
            let b = t.sides[(i + 1) % 3];
            *entries.entry((a, b)).or_insert(0) += 1;
            *entries.entry((b, a)).or_insert(0) -= 1;
        }
    }
    entries.retain(|_, v| *v != 0);
    ExchangeMatrix {
        edges: state.edge_ids(),
        frozen: state.boundary.clone(),
        entries,
    }
}

/// Dual graph: one trivalent vertex per triangle, half-edges in clockwise
/// cyclic order (sides are stored counter-clockwise, so the clockwise
/// successor of side `s` is side `s-1 mod 3`).
#[derive(Debug, Clone)]
pub struct DualGraph {
    pub vertices: Vec<usize>,
    clockwise: BTreeMap<usize, [usize; 3]>,
}

impl DualGraph {
    /// Half-edges at a vertex in clockwise cyclic order.
    pub fn clockwise_sides(&self, vertex: usize) -> Result<[usize; 3]> {
        self.clockwise
            .get(&vertex)
            .copied()
            .ok_or(Error::UnknownSite { site: vertex })
    }
}

pub fn dual_graph(state: &DottedTriangulation) -> DualGraph {
    let mut clockwise = BTreeMap::new();
    for t in state.triangles() {
        clockwise.insert(t.label, [t.sides[0], t.sides[2], t.sides[1]]);
    }
    DualGraph {
        vertices: state.labels(),
        clockwise,
    }
}

/// Corner classes of a triangulation.  Corners are `(triangle label, corner
/// index)`; gluing an interior edge identifies the endpoints of its two
/// side occurrences with opposite orientation.  A class away from every
/// boundary edge is a puncture; the remaining (marked) classes chain along
/// boundary edges into boundary components.
#[derive(Debug, Clone)]
pub struct CornerClasses {
    /// Puncture classes, ordered by their smallest corner.
    pub punctures: Vec<BTreeSet<(usize, usize)>>,
    /// Marked boundary-point classes, ordered by their smallest corner.
    pub marked: Vec<BTreeSet<(usize, usize)>>,
    /// Boundary components: the boundary edges and marked classes chained
    /// together, ordered by smallest boundary edge.
    pub components: Vec<(BTreeSet<usize>, Vec<usize>)>,
}

fn corner_of(t: usize, c: usize) -> (usize, usize) {
    (t, c % 3)
}

pub fn corner_classes(state: &DottedTriangulation) -> CornerClasses {
    let mut corners: Vec<(usize, usize)> = Vec::new();
    for t in state.triangles() {
        for c in 0..3 {
            corners.push((t.label, c));
        }
    }
    let index: BTreeMap<(usize, usize), usize> =
        corners.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut parent: Vec<usize> = (0..corners.len()).collect();
    fn root(parent: &mut Vec<usize>, i: usize) -> usize {
        let mut i = i;
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let union = |parent: &mut Vec<usize>, a: (usize, usize), b: (usize, usize)| {
        let (ra, rb) = (root(parent, index[&a]), root(parent, index[&b]));
        parent[ra] = rb;
    };
    for e in state.interior_edges() {
        let occ = state.occurrences(e);
        let ((t1, s1), (t2, s2)) = (occ[0], occ[1]);
        union(&mut parent, corner_of(t1, s1), corner_of(t2, s2 + 1));
        union(&mut parent, corner_of(t1, s1 + 1), corner_of(t2, s2));
    }
    let mut classes: BTreeMap<usize, BTreeSet<(usize, usize)>> = BTreeMap::new();
    for (i, &c) in corners.iter().enumerate() {
        classes
            .entry(root(&mut parent, i))
            .or_default()
            .insert(c);
    }
    let touches_boundary = |class: &BTreeSet<(usize, usize)>| {
        class.iter().any(|&(t, c)| {
            let tri = state.triangle(t).expect("corner refers to its triangle");
            state.is_boundary(tri.sides[c]) || state.is_boundary(tri.sides[(c + 2) % 3])
        })
    };
    let mut punctures = Vec::new();
    let mut marked = Vec::new();
    for class in classes.into_values() {
        if touches_boundary(&class) {
            marked.push(class);
        } else {
            punctures.push(class);
        }
    }
    punctures.sort_by_key(|c| *c.iter().next().expect("nonempty class"));
    marked.sort_by_key(|c| *c.iter().next().expect("nonempty class"));

    // Chain marked classes along boundary edges into components.
    let mut comp_parent: Vec<usize> = (0..marked.len()).collect();
    let class_of = |corner: (usize, usize)| marked.iter().position(|c| c.contains(&corner));
    let mut edge_ends: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &e in &state.boundary_edges() {
        for (t, s) in state.occurrences(e) {
            for corner in [corner_of(t, s), corner_of(t, s + 1)] {
                if let Some(i) = class_of(corner) {
                    edge_ends.entry(e).or_default().push(i);
                }
            }
        }
    }
    for ends in edge_ends.values() {
        for win in ends.windows(2) {
            let (ra, rb) = (
                root(&mut comp_parent, win[0]),
                root(&mut comp_parent, win[1]),
            );
            comp_parent[ra] = rb;
        }
    }
    let mut components: BTreeMap<usize, (BTreeSet<usize>, Vec<usize>)> = BTreeMap::new();
    for (e, ends) in &edge_ends {
        let r = root(&mut comp_parent, ends[0]);
        let entry = components.entry(r).or_default();
        entry.0.insert(*e);
        for &i in ends {
            if !entry.1.contains(&i) {
                entry.1.push(i);
            }
        }
    }
    let mut components: Vec<_> = components.into_values().collect();
    for (_, classes) in &mut components {
        classes.sort_unstable();
    }
    components.sort_by_key(|(edges, _)| *edges.iter().next().expect("nonempty component"));
    CornerClasses {
        punctures,
        marked,
        components,
    }
}

/// Number of ends of `edge` landing in the given corner class.  The two
/// ends are read off one side occurrence; the gluing identifies the
/// corners of the other occurrence with the same pair.
pub fn edge_incidence(
    state: &DottedTriangulation,
    class: &BTreeSet<(usize, usize)>,
    edge: usize,
) -> usize {
    let occ = state.occurrences(edge);
    let (t, s) = occ[0];
    [corner_of(t, s), corner_of(t, s + 1)]
        .iter()
        .filter(|corner| class.contains(corner))
        .count()
}

fn cycle_from(
    state: &DottedTriangulation,
    start: (usize, usize),
    around_boundary: bool,
) -> Vec<(usize, usize)> {
    let mut entries = Vec::new();
    let (mut t, mut c) = start;
    loop {
        let tri = state.triangle(t).expect("walk stays on triangles");
        entries.push((tri.sides[c], t));
        let exit = tri.sides[(c + 2) % 3];
        if around_boundary && state.is_boundary(exit) {
            c = (c + 2) % 3;
        } else {
            let occ = state.occurrences(exit);
            let &(t2, s2) = occ
                .iter()
                .find(|&&(tt, ss)| (tt, ss) != (t, (c + 2) % 3))
                .expect("interior edge has a second occurrence");
            t = t2;
            c = s2;
        }
        if (t, c) == start {
            break;
        }
    }
    entries
}

/// The cyclic `(edge, triangle)` walk around each puncture, one per
/// puncture class, ordered like `corner_classes().punctures`.
pub fn puncture_cycles(state: &DottedTriangulation) -> Vec<Vec<(usize, usize)>> {
    corner_classes(state)
        .punctures
        .iter()
        .map(|class| {
            let &(t, c) = class.iter().next().expect("nonempty class");
            cycle_from(state, (t, c), false)
        })
        .collect()
}

/// The cyclic `(edge, triangle)` walk along each boundary component,
/// ordered like `corner_classes().components`.
pub fn boundary_cycles(state: &DottedTriangulation) -> Vec<Vec<(usize, usize)>> {
    let classes = corner_classes(state);
    classes
        .components
        .iter()
        .map(|(_, class_ids)| {
            let start = class_ids
                .iter()
                .flat_map(|&i| classes.marked[i].iter().copied())
                .min()
                .expect("nonempty component");
            cycle_from(state, start, true)
        })
        .collect()
}

/// A mapping class presented as a move word on a built-in or loaded
/// surface, returning to the starting triangulation up to an explicit
/// relabeling of edges and triangles.  Optional payload carried for
/// built-ins: named homology tracks (one edge-path per state of the word)
/// and the transvection word used by reduced intertwiners.
#[derive(Debug, Clone)]
pub struct MappingClassSpec {
    pub name: String,
    pub surface: String,
    pub initial: DottedTriangulation,
    pub moves: Vec<MoveKind>,
    /// Final edge id → initial edge id.
    pub edge_identification: BTreeMap<usize, usize>,
    /// Final triangle label → initial triangle label.
    pub triangle_identification: BTreeMap<usize, usize>,
    /// Named homology classes as `(edge, triangle)` paths, one path per
    /// state along the move word (`moves.len() + 1` entries).
    pub homology_tracks: BTreeMap<String, Vec<Vec<(usize, usize)>>>,
    /// Transvection word `(track name, sign)` for the polarization change.
    pub transvections: Vec<(String, i64)>,
}

impl MappingClassSpec {
    /// All intermediate triangulations along the move word, starting with
    /// the initial one (`moves.len() + 1` states).
    pub fn states(&self) -> Result<Vec<DottedTriangulation>> {
        let mut states = vec![self.initial.clone()];
        for &kind in &self.moves {
            let mv = apply_move(states.last().expect("nonempty"), kind)?;
            states.push(mv.after);
        }
        Ok(states)
    }

    /// Check that the word closes up: the final state, relabeled through
    /// the identifications, must equal the initial state exactly.
    pub fn validate(&self) -> Result<()> {
        let states = self.states()?;
        let last = states.last().expect("nonempty");
        let map_edge = |e: usize| -> Result<usize> {
            self.edge_identification
                .get(&e)
                .copied()
                .ok_or(Error::NotInvariant {
                    reason: format!("edge {e} missing from the identification"),
                })
        };
        let map_tri = |t: usize| -> Result<usize> {
            self.triangle_identification
                .get(&t)
                .copied()
                .ok_or(Error::NotInvariant {
                    reason: format!("triangle {t} missing from the identification"),
                })
        };
        let mut relabeled = Vec::new();
        for t in last.triangles() {
            relabeled.push(Triangle {
                label: map_tri(t.label)?,
                sides: [
                    map_edge(t.sides[0])?,
                    map_edge(t.sides[1])?,
                    map_edge(t.sides[2])?,
                ],
            });
        }
        let mut boundary = BTreeSet::new();
        for e in last.boundary_edges() {
            boundary.insert(map_edge(e)?);
        }
        let relabeled = DottedTriangulation::new(relabeled, boundary)?;
        for t in self.initial.triangles() {
            let other = relabeled.triangle(t.label)?;
            if other.sides != t.sides {
                return Err(Error::NotInvariant {
                    reason: format!(
                        "triangle {} closes as {:?}, expected {:?}",
                        t.label, other.sides, t.sides
                    ),
                });
            }
        }
        if relabeled.boundary_edges() != self.initial.boundary_edges() {
            return Err(Error::NotInvariant {
                reason: "boundary edges do not close up".into(),
            });
        }
        Ok(())
    }
}

/// Concatenate two mapping classes on the same surface: the second word is
/// relabeled through the first identification (so it acts on the first
/// word's final state), and the identifications compose.
pub fn compose_mapping_classes(
    first: &MappingClassSpec,
    second: &MappingClassSpec,
) -> Result<MappingClassSpec> {
    if first.surface != second.surface {
        return Err(Error::UnknownMapClass {
            name: format!("{},{} (different surfaces)", first.name, second.name),
        });
    }
    let inv_edge: BTreeMap<usize, usize> = first
        .edge_identification
        .iter()
        .map(|(&k, &v)| (v, k))
        .collect();
    let inv_tri: BTreeMap<usize, usize> = first
        .triangle_identification
        .iter()
        .map(|(&k, &v)| (v, k))
        .collect();
    let tr_edge = |e: usize| -> Result<usize> {
        inv_edge.get(&e).copied().ok_or(Error::NotInvariant {
            reason: format!("edge {e} missing from the identification"),
        })
    };
    let tr_tri = |t: usize| -> Result<usize> {
        inv_tri.get(&t).copied().ok_or(Error::NotInvariant {
            reason: format!("triangle {t} missing from the identification"),
        })
    };
    let mut moves = first.moves.clone();
    for &kind in &second.moves {
        moves.push(match kind {
            MoveKind::DotRotation { v } => MoveKind::DotRotation { v: tr_tri(v)? },
            MoveKind::Flip { v, w, edge } => MoveKind::Flip {
                v: tr_tri(v)?,
                w: tr_tri(w)?,
                edge: tr_edge(edge)?,
            },
            MoveKind::Permute { a, b } => MoveKind::Permute {
                a: tr_tri(a)?,
                b: tr_tri(b)?,
            },
        });
    }
    let mut edge_identification = BTreeMap::new();
    for (&f, &mid) in &first.edge_identification {
        edge_identification.insert(
            f,
            *second
                .edge_identification
                .get(&mid)
                .ok_or(Error::NotInvariant {
                    reason: format!("edge {mid} missing from the identification"),
                })?,
        );
    }
    let mut triangle_identification = BTreeMap::new();
    for (&f, &mid) in &first.triangle_identification {
        triangle_identification.insert(
            f,
            *second
                .triangle_identification
                .get(&mid)
                .ok_or(Error::NotInvariant {
                    reason: format!("triangle {mid} missing from the identification"),
                })?,
        );
    }
    Ok(MappingClassSpec {
        name: format!("{},{}", first.name, second.name),
        surface: first.surface.clone(),
        initial: first.initial.clone(),
        moves,
        edge_identification,
        triangle_identification,
        homology_tracks: BTreeMap::new(),
        transvections: Vec::new(),
    })
}

fn tri(label: usize, sides: [usize; 3]) -> Triangle {
    Triangle { label, sides }
}

/// Built-in surfaces:
///
/// * `torus1` — once-punctured torus, 2 triangles, edges 1..3.
/// * `sphere3` — thrice-punctured sphere, 2 triangles, edges 1..3.
/// * `disk1_2` — once-punctured disk with two marked boundary points,
///   2 triangles, boundary edges {1, 3}.
/// * `annulus_1_1` — annulus with one marked point per boundary circle,
///   2 triangles, boundary edges {3, 4}.
/// * `pentagon_disk` — disk with five marked boundary points, 3 triangles,
///   boundary edges 1..5 and interior edges {6, 7}.
pub fn builtin_surface(name: &str) -> Result<DottedTriangulation> {
    match name {
        "torus1" => DottedTriangulation::new(vec![tri(0, [3, 1, 2]), tri(1, [2, 3, 1])], []),
        "sphere3" => DottedTriangulation::new(vec![tri(0, [3, 1, 2]), tri(1, [1, 3, 2])], []),
        "disk1_2" => {
            DottedTriangulation::new(vec![tri(0, [1, 4, 2]), tri(1, [2, 4, 3])], [1, 3])
        }
        "annulus_1_1" => {
            DottedTriangulation::new(vec![tri(0, [3, 1, 2]), tri(1, [2, 4, 1])], [3, 4])
        }
        "pentagon_disk" => DottedTriangulation::new(
            vec![tri(0, [2, 6, 1]), tri(1, [3, 7, 6]), tri(2, [4, 5, 7])],
            [1, 2, 3, 4, 5],
        ),
        _ => Err(Error::UnknownSurface { name: name.into() }),
    }
}

fn identity_map(keys: impl IntoIterator<Item = usize>) -> BTreeMap<usize, usize> {
    keys.into_iter().map(|k| (k, k)).collect()
}

/// Built-in mapping classes on the once-punctured torus:
///
/// * `Ta` — the Dehn twist along the a-cycle: flip at edge 1, two dot
///   rotations of `w`, swap the labels; edges close up as 1↔2.
/// * `Tb_inv` — the inverse Dehn twist along the b-cycle: a single flip at
///   edge 1; edges close up as 1↔3.
/// * `identity` — the empty word.
/// * `word:m1,m2,…` — concatenation of built-ins in the given order.
pub fn builtin_mapping_class(name: &str) -> Result<MappingClassSpec> {
    if let Some(word) = name.strip_prefix("word:") {
        let parts: Vec<&str> = word.split(',').map(str::trim).collect();
        if parts.is_empty() || parts.iter().any(|p| p.is_empty()) {
            return Err(Error::UnknownMapClass { name: name.into() });
        }
        let mut spec = builtin_mapping_class(parts[0])?;
        for part in &parts[1..] {
            spec = compose_mapping_classes(&spec, &builtin_mapping_class(part)?)?;
        }
        spec.name = name.into();
        return Ok(spec);
    }
    let initial = builtin_surface("torus1")?;
    match name {
        "Ta" => Ok(MappingClassSpec {
            name: name.into(),
            surface: "torus1".into(),
            initial,
            moves: vec![
                MoveKind::Flip {
                    v: 0,
                    w: 1,
                    edge: 1,
                },
                MoveKind::DotRotation { v: 1 },
                MoveKind::DotRotation { v: 1 },
                MoveKind::Permute { a: 0, b: 1 },
            ],
            edge_identification: BTreeMap::from([(1, 2), (2, 1), (3, 3)]),
            triangle_identification: identity_map([0, 1]),
            homology_tracks: BTreeMap::from([
                (
                    "a".to_string(),
                    vec![
                        vec![(2, 0), (1, 1)],
                        vec![(2, 0), (1, 1)],
                        vec![(2, 0), (1, 1)],
                        vec![(2, 0), (1, 1)],
                        vec![(2, 1), (1, 0)],
                    ],
                ),
                (
                    "b".to_string(),
                    vec![
                        vec![(3, 0), (1, 1)],
                        vec![(1, 0), (3, 1)],
                        vec![(1, 0), (3, 1)],
                        vec![(1, 0), (3, 1)],
                        vec![(1, 1), (3, 0)],
                    ],
                ),
            ]),
            transvections: Vec::new(),
        }),
        "Tb_inv" => Ok(MappingClassSpec {
            name: name.into(),
            surface: "torus1".into(),
            initial,
            moves: vec![MoveKind::Flip {
                v: 0,
                w: 1,
                edge: 1,
            }],
            edge_identification: BTreeMap::from([(1, 3), (2, 2), (3, 1)]),
            triangle_identification: identity_map([0, 1]),
            homology_tracks: BTreeMap::from([(
                "b".to_string(),
                vec![vec![(3, 0), (1, 1)], vec![(1, 0), (3, 1)]],
            )]),
            transvections: vec![("b".to_string(), 1)],
        }),
        "identity" => Ok(MappingClassSpec {
            name: name.into(),
            surface: "torus1".into(),
            initial,
            moves: Vec::new(),
            edge_identification: identity_map([1, 2, 3]),
            triangle_identification: identity_map([0, 1]),
            homology_tracks: BTreeMap::new(),
            transvections: Vec::new(),
        }),
        _ => Err(Error::UnknownMapClass { name: name.into() }),
    }
}

/// Parse a surface from the declarative text format: one directive per
/// line, `#` comments.
///
/// ```text
/// triangle <label> <side0> <side1> <side2>
/// boundary <edge> <edge> …
/// ```
pub fn parse_surface(text: &str) -> Result<DottedTriangulation> {
    let mut triangles = Vec::new();
    let mut boundary = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let keyword = parts.next().expect("nonempty line");
        let nums: Vec<usize> = parts
            .map(|p| {
                p.parse().map_err(|_| Error::InvalidPath {
                    reason: format!("line {}: expected integer, got {p:?}", lineno + 1),
                })
            })
            .collect::<Result<_>>()?;
        match keyword {
            "triangle" if nums.len() == 4 => {
                triangles.push(tri(nums[0], [nums[1], nums[2], nums[3]]));
            }
            "boundary" => boundary.extend(nums),
            _ => {
                return Err(Error::InvalidPath {
                    reason: format!("line {}: unrecognized directive {line:?}", lineno + 1),
                })
            }
        }
    }
    DottedTriangulation::new(triangles, boundary)
}

/// Parse a mapping class from the declarative text format, on top of a
/// surface given in the same text:
///
/// ```text
/// triangle …            # surface as in parse_surface
/// boundary …
/// name <word>
/// rotate <triangle>
/// flip <v> <w> <edge>
/// permute <a> <b>
/// identify-edge <final> <initial>
/// identify-triangle <final> <initial>
/// ```
pub fn parse_mapping_class(text: &str) -> Result<MappingClassSpec> {
    let initial = parse_surface(
        &text
            .lines()
            .filter(|l| {
                let l = l.trim_start();
                l.starts_with("triangle") || l.starts_with("boundary")
            })
            .collect::<Vec<_>>()
            .join("\n"),
    )?;
    let mut name = String::from("loaded");
    let mut moves = Vec::new();
    let mut edge_identification = BTreeMap::new();
    let mut triangle_identification = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty()
            || line.starts_with("triangle")
            || line.starts_with("boundary")
        {
            continue;
        }
        let mut parts = line.split_whitespace();
        let keyword = parts.next().expect("nonempty line");
        let rest: Vec<&str> = parts.collect();
        let nums = |rest: &[&str]| -> Result<Vec<usize>> {
            rest.iter()
                .map(|p| {
                    p.parse().map_err(|_| Error::InvalidPath {
                        reason: format!("line {}: expected integer, got {p:?}", lineno + 1),
                    })
                })
                .collect()
        };
        match keyword {
            "name" if rest.len() == 1 => name = rest[0].to_string(),
            "rotate" => {
                let n = nums(&rest)?;
                if n.len() != 1 {
                    return Err(Error::InvalidPath {
                        reason: format!("line {}: rotate takes one triangle", lineno + 1),
                    });
                }
                moves.push(MoveKind::DotRotation { v: n[0] });
            }
            "flip" => {
                let n = nums(&rest)?;
                if n.len() != 3 {
                    return Err(Error::InvalidPath {
                        reason: format!("line {}: flip takes v w edge", lineno + 1),
                    });
                }
                moves.push(MoveKind::Flip {
                    v: n[0],
                    w: n[1],
                    edge: n[2],
                });
            }
            "permute" => {
                let n = nums(&rest)?;
                if n.len() != 2 {
                    return Err(Error::InvalidPath {
                        reason: format!("line {}: permute takes two triangles", lineno + 1),
                    });
                }
                moves.push(MoveKind::Permute { a: n[0], b: n[1] });
            }
            "identify-edge" => {
                let n = nums(&rest)?;
                if n.len() != 2 {
                    return Err(Error::InvalidPath {
                        reason: format!("line {}: identify-edge takes two edges", lineno + 1),
                    });
                }
                edge_identification.insert(n[0], n[1]);
            }
            "identify-triangle" => {
                let n = nums(&rest)?;
                if n.len() != 2 {
                    return Err(Error::InvalidPath {
                        reason: format!(
                            "line {}: identify-triangle takes two triangles",
                            lineno + 1
                        ),
                    });
                }
                triangle_identification.insert(n[0], n[1]);
            }
            _ => {
                return Err(Error::InvalidPath {
                    reason: format!("line {}: unrecognized directive {line:?}", lineno + 1),
                })
            }
        }
    }
    Ok(MappingClassSpec {
        name,
        surface: "loaded".into(),
        initial,
        moves,
        edge_identification,
        triangle_identification,
        homology_tracks: BTreeMap::new(),
        transvections: Vec::new(),
    })
}
