//! Structured tetrahedral meshes of axis-aligned boxes.
//!
//! Every hexahedral cell is cut into the six Kuhn tetrahedra sharing the
//! cell diagonal from its lowest to its highest corner. Because the diagonal
//! direction is the same in every cell, faces of neighbouring cells match.

use crate::error::{Error, Result};

/// Local vertex pairs of the six tetrahedron edges, in local edge order.
pub const TET_EDGES: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];

/// Outward-oriented local faces of a positively oriented tetrahedron.
pub const TET_FACES: [[usize; 3]; 4] = [[1, 2, 3], [0, 3, 2], [0, 1, 3], [0, 2, 1]];

/// An axis-aligned box `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxDomain {
    pub lo: [f64; 3],
    pub hi: [f64; 3],
}

impl BoxDomain {
    pub fn unit_cube() -> Self {
        Self {
            lo: [0.0; 3],
            hi: [1.0; 3],
        }
    }

    pub fn new(lo: [f64; 3], hi: [f64; 3]) -> Self {
        Self { lo, hi }
    }

    pub fn volume(&self) -> f64 {
        (0..3).map(|d| self.hi[d] - self.lo[d]).product()
    }
}

#[derive(Debug, Clone)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    /// Positively oriented tetrahedra.
    pub tets: Vec<[usize; 4]>,
    /// Sorted, deduplicated vertex pairs.
    pub edges: Vec<[usize; 2]>,
    /// Per tet, indices into `edges` in [`TET_EDGES`] order.
    pub tet_edges: Vec<[usize; 6]>,
    /// Outward-oriented boundary triangles.
    pub boundary_faces: Vec<[usize; 3]>,
    /// Owning tet of each boundary face.
    pub boundary_face_tets: Vec<usize>,
    pub domain: BoxDomain,
    pub cells: [usize; 3],
}

/// Signed volume of the tetrahedron `(a, b, c, d)`.
pub fn signed_volume(a: &[f64; 3], b: &[f64; 3], c: &[f64; 3], d: &[f64; 3]) -> f64 {
    let u = sub(b, a);
    let v = sub(c, a);
    let w = sub(d, a);
    det3(&u, &v, &w) / 6.0
}

pub(crate) fn sub(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn det3(u: &[f64; 3], v: &[f64; 3], w: &[f64; 3]) -> f64 {
    u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0])
        + u[2] * (v[0] * w[1] - v[1] * w[0])
}

/// Builds the Kuhn-subdivided mesh of `domain` with `nx * ny * nz` cells.
///
/// Vertices are numbered lexicographically with x fastest. Within a cell with
/// lowest corner `o`, the tetrahedron for axis permutation `(a, b, c)` is
/// `o, o+e_a, o+e_a+e_b, o+e_a+e_b+e_c`; for odd permutations the last two
/// vertices are swapped to keep the orientation positive.
pub fn build_box_mesh(nx: usize, ny: usize, nz: usize, domain: BoxDomain) -> Result<Mesh> {
    if nx == 0 || ny == 0 || nz == 0 {
        return Err(Error::InvalidMesh("subdivision counts must be positive".into()));
    }
    if (0..3).any(|d| !(domain.hi[d] > domain.lo[d])) {
        return Err(Error::InvalidMesh("box extents must be positive".into()));
    }
    let n = [nx, ny, nz];
    let vid = |i: usize, j: usize, k: usize| i + (nx + 1) * (j + (ny + 1) * k);

    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1) * (nz + 1));
    for k in 0..=nz {
        for j in 0..=ny {
            for i in 0..=nx {
                let idx = [i, j, k];
                let mut p = [0.0; 3];
                for d in 0..3 {
                    let t = idx[d] as f64 / n[d] as f64;
                    p[d] = domain.lo[d] + t * (domain.hi[d] - domain.lo[d]);
                }
                vertices.push(p);
            }
        }
    }

    const PERMS: [([usize; 3], bool); 6] = [
        ([0, 1, 2], true),
        ([0, 2, 1], false),
        ([1, 0, 2], false),
        ([1, 2, 0], true),
        ([2, 0, 1], true),
        ([2, 1, 0], false),
    ];
    let mut tets = Vec::with_capacity(6 * nx * ny * nz);
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                for (perm, even) in PERMS {
                    let mut c = [i, j, k];
                    let mut tet = [vid(c[0], c[1], c[2]); 4];
                    for (s, &axis) in perm.iter().enumerate() {
                        c[axis] += 1;
                        tet[s + 1] = vid(c[0], c[1], c[2]);
                    }
                    if !even {
                        tet.swap(2, 3);
                    }
                    tets.push(tet);
                }
            }
        }
    }

    let mut edges: Vec<[usize; 2]> = tets
        .iter()
        .flat_map(|t| {
            TET_EDGES.iter().map(move |&[a, b]| {
                let (u, v) = (t[a], t[b]);
                [u.min(v), u.max(v)]
            })
        })
        .collect();
    edges.sort_unstable();
    edges.dedup();
    let tet_edges = tets
        .iter()
        .map(|t| {
            let mut out = [0; 6];
            for (e, &[a, b]) in TET_EDGES.iter().enumerate() {
                let key = [t[a].min(t[b]), t[a].max(t[b])];
                out[e] = edges.binary_search(&key).expect("edge table is complete");
            }
            out
        })
        .collect();

    // faces appearing once are on the boundary
    let mut faces: Vec<([usize; 3], usize, usize)> = Vec::with_capacity(tets.len() * 4);
    for (t, tet) in tets.iter().enumerate() {
        for (f, lf) in TET_FACES.iter().enumerate() {
            let mut key = [tet[lf[0]], tet[lf[1]], tet[lf[2]]];
            key.sort_unstable();
            faces.push((key, t, f));
        }
    }
    faces.sort_unstable();
    let mut boundary_faces = Vec::new();
    let mut boundary_face_tets = Vec::new();
    let mut i = 0;
    while i < faces.len() {
        let mut j = i + 1;
        while j < faces.len() && faces[j].0 == faces[i].0 {
            j += 1;
        }
        match j - i {
            1 => {
                let (_, t, f) = faces[i];
                let lf = TET_FACES[f];
                boundary_faces.push([tets[t][lf[0]], tets[t][lf[1]], tets[t][lf[2]]]);
                boundary_face_tets.push(t);
            }
            2 => {}
            m => {
                return Err(Error::InvalidMesh(format!(
                    "face {:?} shared by {m} tetrahedra",
                    faces[i].0
                )))
            }
        }
        i = j;
    }

    Ok(Mesh {
        vertices,
        tets,
        edges,
        tet_edges,
        boundary_faces,
        boundary_face_tets,
        domain,
        cells: n,
    })
}

impl Mesh {
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_tets(&self) -> usize {
        self.tets.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn tet_vertices(&self, t: usize) -> [[f64; 3]; 4] {
        self.tets[t].map(|v| self.vertices[v])
    }

    pub fn tet_volume(&self, t: usize) -> f64 {
        let [a, b, c, d] = self.tet_vertices(t);
        signed_volume(&a, &b, &c, &d)
    }

    pub fn tet_centroid(&self, t: usize) -> [f64; 3] {
        let vs = self.tet_vertices(t);
        let mut c = [0.0; 3];
        for v in &vs {
            for d in 0..3 {
                c[d] += 0.25 * v[d];
            }
        }
        c
    }

    pub fn face_centroid(&self, f: usize) -> [f64; 3] {
        let mut c = [0.0; 3];
        for &v in &self.boundary_faces[f] {
            for d in 0..3 {
                c[d] += self.vertices[v][d] / 3.0;
            }
        }
        c
    }

    pub fn edge_midpoint(&self, e: usize) -> [f64; 3] {
        let [a, b] = self.edges[e];
        let (p, q) = (self.vertices[a], self.vertices[b]);
        [
            0.5 * (p[0] + q[0]),
            0.5 * (p[1] + q[1]),
            0.5 * (p[2] + q[2]),
        ]
    }

    /// Position of a vertex pair in the edge table.
    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        self.edges.binary_search(&[a.min(b), a.max(b)]).ok()
    }

    /// Assigns one marker to every boundary face.
    ///
    /// Markers are tested in order against the face centroid; the first match
    /// wins and unmatched faces get [`DEFAULT_MARKER`].
    pub fn classify_boundary(&self, markers: &[BoundaryMarker]) -> BoundaryMarking {
        let mut names: Vec<String> = markers.iter().map(|m| m.name.clone()).collect();
        let default = names.len();
        names.push(DEFAULT_MARKER.to_string());
        let face_markers = (0..self.boundary_faces.len())
            .map(|f| {
                let c = self.face_centroid(f);
                markers
                    .iter()
                    .position(|m| (m.predicate)(&c))
                    .unwrap_or(default)
            })
            .collect();
        BoundaryMarking {
            names,
            face_markers,
        }
    }
}

pub const DEFAULT_MARKER: &str = "default";

/// Boolean test on a boundary face centroid.
pub type FacePredicate = Box<dyn Fn(&[f64; 3]) -> bool + Send + Sync>;

pub struct BoundaryMarker {
    pub name: String,
    pub predicate: FacePredicate,
}

impl BoundaryMarker {
    pub fn new(name: impl Into<String>, predicate: impl Fn(&[f64; 3]) -> bool + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            predicate: Box::new(predicate),
        }
    }
}

impl std::fmt::Debug for BoundaryMarker {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BoundaryMarker").field("name", &self.name).finish()
    }
}

/// Marker index per boundary face; the last name is always the default marker.
#[derive(Debug, Clone)]
pub struct BoundaryMarking {
    pub names: Vec<String>,
    pub face_markers: Vec<usize>,
}

impl BoundaryMarking {
    pub fn marker_id(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Faces carrying marker `id`.
    pub fn faces(&self, id: usize) -> Vec<usize> {
        (0..self.face_markers.len())
            .filter(|&f| self.face_markers[f] == id)
            .collect()
    }

    /// Sorted vertices touched by faces with marker `id`.
    pub fn vertices(&self, mesh: &Mesh, id: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .faces(id)
            .into_iter()
            .flat_map(|f| mesh.boundary_faces[f])
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Sorted edge indices lying on faces with marker `id`.
    pub fn edges(&self, mesh: &Mesh, id: usize) -> Vec<usize> {
        let mut e: Vec<usize> = self
            .faces(id)
            .into_iter()
            .flat_map(|f| {
                let [a, b, c] = mesh.boundary_faces[f];
                [(a, b), (b, c), (a, c)]
            })
            .map(|(a, b)| mesh.edge_index(a, b).expect("boundary edge in table"))
            .collect();
        e.sort_unstable();
        e.dedup();
        e
    }
}
