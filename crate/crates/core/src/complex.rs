//! Simplicial complexes given by facet lists, and their Hasse diagrams.
//!
//! Faces are stored with dense ids ordered by dimension and then
//! lexicographically by vertex sequence. Arcs of the Hasse diagram point
//! from a face to each of its codimension-one subfaces and are numbered by
//! `(level, upper, lower)`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::ops::Range;

use crate::error::ComplexError;

pub type FaceId = usize;
pub type ArcId = usize;

/// A non-empty face, stored as a strictly increasing list of internal vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    vertices: Vec<u32>,
}

impl Face {
    /// Normalizes (sorts, removes duplicates) the vertex list.
    pub fn new(mut vertices: Vec<u32>) -> Result<Self, ComplexError> {
        if vertices.is_empty() {
            return Err(ComplexError::EmptyFace);
        }
        vertices.sort_unstable();
        vertices.dedup();
        Ok(Face { vertices })
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    /// The codimension-one subfaces, obtained by omitting vertex `k` for
    /// `k = 0, 1, ..., dim`. Empty for vertices.
    pub fn boundary(&self) -> impl Iterator<Item = Face> + '_ {
        let n = if self.vertices.len() > 1 { self.vertices.len() } else { 0 };
        (0..n).map(move |k| {
            let mut v = self.vertices.clone();
            v.remove(k);
            Face { vertices: v }
        })
    }

    pub fn contains(&self, other: &Face) -> bool {
        other.vertices.iter().all(|v| self.vertices.binary_search(v).is_ok())
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// A finite abstract simplicial complex (the empty face excluded).
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    faces: Vec<Face>,
    dim_offsets: Vec<usize>,
    index: HashMap<Face, FaceId>,
    labels: Vec<String>,
}

impl SimplicialComplex {
    /// Builds the downward closure of the given vertex sets. Vertex numbers
    /// are renumbered densely in increasing order and remembered as labels.
    pub fn from_facets<S: AsRef<[u32]>>(facets: &[S]) -> Result<Self, ComplexError> {
        let labelled: Vec<Vec<String>> = facets
            .iter()
            .map(|f| f.as_ref().iter().map(|v| v.to_string()).collect())
            .collect();
        Self::from_labelled_facets(&labelled)
    }

    /// Builds the closure of facets whose vertices are arbitrary tokens.
    ///
    /// Tokens are ordered numerically when every token is an integer and
    /// lexicographically otherwise; internal ids follow that order.
    pub fn from_labelled_facets<S: AsRef<str>>(facets: &[Vec<S>]) -> Result<Self, ComplexError> {
        if facets.is_empty() {
            return Err(ComplexError::NoFacets);
        }
        let mut tokens = BTreeSet::new();
        for facet in facets {
            if facet.is_empty() {
                return Err(ComplexError::EmptyFace);
            }
            for t in facet {
                tokens.insert(t.as_ref().to_string());
            }
        }
        let mut labels: Vec<String> = tokens.into_iter().collect();
        if labels.iter().all(|t| t.parse::<i64>().is_ok()) {
            labels.sort_by_key(|t| t.parse::<i64>().unwrap());
            labels.dedup_by_key(|t| t.parse::<i64>().unwrap());
        }
        let id_of: HashMap<&str, u32> = labels
            .iter()
            .enumerate()
            .map(|(i, t)| (t.as_str(), i as u32))
            .collect();
        let numeric = labels.iter().all(|t| t.parse::<i64>().is_ok());
        let lookup = |t: &str| -> u32 {
            if numeric {
                // "01" and "1" denote the same vertex
                let v = t.parse::<i64>().unwrap();
                let pos = labels.binary_search_by_key(&v, |l| l.parse::<i64>().unwrap());
                pos.unwrap() as u32
            } else {
                id_of[t]
            }
        };

        let mut all: BTreeSet<Face> = BTreeSet::new();
        let mut stack: Vec<Face> = Vec::new();
        for facet in facets {
            let face = Face::new(facet.iter().map(|t| lookup(t.as_ref())).collect())?;
            stack.push(face);
        }
        while let Some(face) = stack.pop() {
            if all.contains(&face) {
                continue;
            }
            stack.extend(face.boundary());
            all.insert(face);
        }

        let d = all.iter().map(Face::dim).max().unwrap_or(0);
        let mut by_dim: Vec<Vec<Face>> = vec![Vec::new(); d + 1];
        for face in all {
            let k = face.dim();
            by_dim[k].push(face);
        }
        let mut faces = Vec::new();
        let mut dim_offsets = vec![0];
        for layer in by_dim {
            // BTreeSet order is already lexicographic within a dimension
            faces.extend(layer);
            dim_offsets.push(faces.len());
        }
        let index = faces.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        Ok(SimplicialComplex { faces, dim_offsets, index, labels })
    }

    /// Parses the facet-list text format: one facet per line, whitespace
    /// separated vertex tokens, `#` comments and blank lines ignored.
    pub fn parse(text: &str) -> Result<Self, ComplexError> {
        let mut facets = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.iter().any(|t| t.contains('#')) {
                return Err(ComplexError::Parse {
                    line: lineno + 1,
                    message: "'#' is only allowed at the start of a line".into(),
                });
            }
            facets.push(tokens);
        }
        if facets.is_empty() {
            return Err(ComplexError::NoFacets);
        }
        Self::from_labelled_facets(&facets)
    }

    /// Renders the facets in the facet-list text format, using the original labels.
    pub fn to_facet_list(&self) -> String {
        let mut out = String::new();
        for id in self.facets() {
            let line: Vec<&str> = self.faces[id]
                .vertices()
                .iter()
                .map(|&v| self.labels[v as usize].as_str())
                .collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim_offsets.len() - 2
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.dim_offsets[1]
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.dim_offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Number of faces of dimension `i`, zero above the dimension.
    pub fn f(&self, i: usize) -> usize {
        if i > self.dim() {
            0
        } else {
            self.dim_offsets[i + 1] - self.dim_offsets[i]
        }
    }

    pub fn faces_of_dim(&self, i: usize) -> Range<FaceId> {
        if i > self.dim() {
            let n = self.faces.len();
            n..n
        } else {
            self.dim_offsets[i]..self.dim_offsets[i + 1]
        }
    }

    pub fn face(&self, id: FaceId) -> &Face {
        &self.faces[id]
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face_id(&self, face: &Face) -> Option<FaceId> {
        self.index.get(face).copied()
    }

    pub fn face_dim(&self, id: FaceId) -> usize {
        self.faces[id].dim()
    }

    pub fn vertex_label(&self, v: u32) -> &str {
        &self.labels[v as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Original labels of a face's vertices.
    pub fn face_labels(&self, id: FaceId) -> Vec<String> {
        self.faces[id]
            .vertices()
            .iter()
            .map(|&v| self.labels[v as usize].clone())
            .collect()
    }

    /// Looks a face up by original vertex labels.
    pub fn face_id_by_labels<S: AsRef<str>>(&self, labels: &[S]) -> Option<FaceId> {
        let mut vs = Vec::with_capacity(labels.len());
        for l in labels {
            let l = l.as_ref();
            let pos = self.labels.iter().position(|x| x == l).or_else(|| {
                let n = l.parse::<i64>().ok()?;
                self.labels.iter().position(|x| x.parse::<i64>().ok() == Some(n))
            })?;
            vs.push(pos as u32);
        }
        let face = Face::new(vs).ok()?;
        if face.vertices().len() != labels.len() {
            return None;
        }
        self.face_id(&face)
    }

    /// Ids of the inclusion-maximal faces.
    pub fn facets(&self) -> Vec<FaceId> {
        let mut covered = vec![false; self.faces.len()];
        for face in &self.faces {
            for sub in face.boundary() {
                covered[self.index[&sub]] = true;
            }
        }
        (0..self.faces.len()).filter(|&i| !covered[i]).collect()
    }

    /// Ids of the codimension-one subfaces of `id`, ascending.
    pub fn boundary_ids(&self, id: FaceId) -> Vec<FaceId> {
        let mut ids: Vec<FaceId> = self.faces[id].boundary().map(|f| self.index[&f]).collect();
        ids.sort_unstable();
        ids
    }

    /// Vertex ids of each connected component of the graph of the complex,
    /// components ordered by their smallest vertex.
    pub fn components(&self) -> Vec<Vec<u32>> {
        let nv = self.num_vertices();
        let mut adj = vec![Vec::new(); nv];
        for e in self.faces_of_dim(1) {
            let v = self.faces[e].vertices();
            adj[v[0] as usize].push(v[1] as usize);
            adj[v[1] as usize].push(v[0] as usize);
        }
        let mut comp = vec![usize::MAX; nv];
        let mut out = Vec::new();
        for s in 0..nv {
            if comp[s] != usize::MAX {
                continue;
            }
            let c = out.len();
            let mut members = vec![s as u32];
            comp[s] = c;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &adj[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = c;
                        members.push(w as u32);
                        queue.push_back(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Whether the graph of the complex (vertices and edges) is connected.
    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Splits into one complex per connected component, each keeping the
    /// original vertex labels.
    pub fn split_components(&self) -> Vec<SimplicialComplex> {
        let comps = self.components();
        if comps.len() == 1 {
            return vec![self.clone()];
        }
        let mut owner = vec![0usize; self.num_vertices()];
        for (c, members) in comps.iter().enumerate() {
            for &v in members {
                owner[v as usize] = c;
            }
        }
        let mut facet_lists: Vec<Vec<Vec<String>>> = vec![Vec::new(); comps.len()];
        for id in self.facets() {
            let c = owner[self.faces[id].vertices()[0] as usize];
            facet_lists[c].push(self.face_labels(id));
        }
        facet_lists
            .iter()
            .map(|fl| SimplicialComplex::from_labelled_facets(fl).expect("component is non-empty"))
            .collect()
    }
}

/// An arc `(upper, lower)` of the Hasse diagram with `lower` covered by `upper`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Arc {
    pub upper: FaceId,
    pub lower: FaceId,
}

/// Hasse diagram of a complex, split into levels `A_0, ..., A_{d-1}` where
/// level `i` holds the arcs between `i`-faces and `(i+1)`-faces.
#[derive(Clone, Debug)]
pub struct HasseDiagram {
    arcs: Vec<Arc>,
    level_offsets: Vec<usize>,
    dim_offsets: Vec<usize>,
    down: Vec<Vec<ArcId>>,
    up: Vec<Vec<ArcId>>,
}

impl HasseDiagram {
    pub fn new(complex: &SimplicialComplex) -> Self {
        let n = complex.num_faces();
        let d = complex.dim();
        let mut arcs = Vec::new();
        let mut level_offsets = vec![0];
        let mut down = vec![Vec::new(); n];
        let mut up = vec![Vec::new(); n];
        for level in 0..d {
            for upper in complex.faces_of_dim(level + 1) {
                for lower in complex.boundary_ids(upper) {
                    let id = arcs.len();
                    arcs.push(Arc { upper, lower });
                    down[upper].push(id);
                    up[lower].push(id);
                }
            }
            level_offsets.push(arcs.len());
        }
        HasseDiagram { arcs, level_offsets, dim_offsets: complex.dim_offsets.clone(), down, up }
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    pub fn num_faces(&self) -> usize {
        self.down.len()
    }

    /// Dimension of the underlying complex.
    pub fn dim(&self) -> usize {
        self.dim_offsets.len() - 2
    }

    pub fn num_levels(&self) -> usize {
        self.level_offsets.len() - 1
    }

    pub fn arc(&self, id: ArcId) -> Arc {
        self.arcs[id]
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn level_arcs(&self, level: usize) -> Range<ArcId> {
        self.level_offsets[level]..self.level_offsets[level + 1]
    }

    /// Level of an arc, i.e. the dimension of its lower face.
    pub fn arc_level(&self, id: ArcId) -> usize {
        self.level_offsets.partition_point(|&o| o <= id) - 1
    }

    pub fn face_dim(&self, face: FaceId) -> usize {
        self.dim_offsets.partition_point(|&o| o <= face) - 1
    }

    pub fn faces_of_dim(&self, i: usize) -> Range<FaceId> {
        if i + 1 >= self.dim_offsets.len() {
            let n = self.num_faces();
            n..n
        } else {
            self.dim_offsets[i]..self.dim_offsets[i + 1]
        }
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.dim_offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Arcs whose upper face is `face` (to its facets).
    pub fn down_arcs(&self, face: FaceId) -> &[ArcId] {
        &self.down[face]
    }

    /// Arcs whose lower face is `face` (to its cofaces).
    pub fn up_arcs(&self, face: FaceId) -> &[ArcId] {
        &self.up[face]
    }

    /// All arcs incident to `face`, written `δ(F)` in the matching rows.
    pub fn incident(&self, face: FaceId) -> impl Iterator<Item = ArcId> + '_ {
        self.down[face].iter().chain(self.up[face].iter()).copied()
    }

    /// Looks up the arc between two faces, if one covers the other.
    pub fn find_arc(&self, upper: FaceId, lower: FaceId) -> Option<ArcId> {
        self.down
            .get(upper)?
            .iter()
            .copied()
            .find(|&a| self.arcs[a].lower == lower)
    }

    /// The bipartite level graph between `i`-faces and `(i+1)`-faces.
    pub fn level(&self, i: usize) -> Result<LevelGraph<'_>, ComplexError> {
        if i >= self.num_levels() {
            return Err(ComplexError::LevelOutOfRange { level: i, levels: self.num_levels() });
        }
        Ok(LevelGraph { hasse: self, level: i })
    }
}

/// Borrowed view of one level `H_i` of a Hasse diagram.
#[derive(Clone, Copy, Debug)]
pub struct LevelGraph<'a> {
    hasse: &'a HasseDiagram,
    level: usize,
}

impl<'a> LevelGraph<'a> {
    pub fn index(&self) -> usize {
        self.level
    }

    pub fn hasse(&self) -> &'a HasseDiagram {
        self.hasse
    }

    pub fn lower_faces(&self) -> Range<FaceId> {
        self.hasse.faces_of_dim(self.level)
    }

    pub fn upper_faces(&self) -> Range<FaceId> {
        self.hasse.faces_of_dim(self.level + 1)
    }

    /// All faces of the level, lower faces first; ids are contiguous.
    pub fn faces(&self) -> Range<FaceId> {
        self.lower_faces().start..self.upper_faces().end
    }

    pub fn num_faces(&self) -> usize {
        self.faces().len()
    }

    pub fn arcs(&self) -> Range<ArcId> {
        self.hasse.level_arcs(self.level)
    }

    pub fn contains_face(&self, face: FaceId) -> bool {
        self.faces().contains(&face)
    }

    /// Arcs of this level incident to `face`.
    pub fn incident(&self, face: FaceId) -> &'a [ArcId] {
        let dim = self.hasse.face_dim(face);
        if dim == self.level {
            self.hasse.up_arcs(face)
        } else if dim == self.level + 1 {
            self.hasse.down_arcs(face)
        } else {
            &[]
        }
    }

    pub fn degree(&self, face: FaceId) -> usize {
        self.incident(face).len()
    }

    /// The other endpoint of `arc` seen from `face`.
    pub fn other(&self, arc: ArcId, face: FaceId) -> FaceId {
        let a = self.hasse.arc(arc);
        if a.upper == face {
            a.lower
        } else {
            a.upper
        }
    }
}
