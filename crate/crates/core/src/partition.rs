//! Element partitioning by recursive coordinate multisection.

use std::collections::VecDeque;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};

use crate::error::{Error, Result};
use crate::mesh::{Mesh, TET_FACES};

/// Element-to-element adjacency through shared faces, sorted per element.
pub fn dual_graph(mesh: &Mesh) -> Vec<Vec<usize>> {
    let mut faces: Vec<([usize; 3], usize)> = Vec::with_capacity(4 * mesh.num_tets());
    for (t, tet) in mesh.tets.iter().enumerate() {
        for lf in TET_FACES {
            let mut key = [tet[lf[0]], tet[lf[1]], tet[lf[2]]];
            key.sort_unstable();
            faces.push((key, t));
        }
    }
    faces.sort_unstable();
    let mut adj = vec![Vec::new(); mesh.num_tets()];
    for w in faces.windows(2) {
        if w[0].0 == w[1].0 {
            adj[w[0].1].push(w[1].1);
            adj[w[1].1].push(w[0].1);
        }
    }
    for a in &mut adj {
        a.sort_unstable();
    }
    adj
}

/// Non-overlapping element partition into `num_parts` subdomains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    element_parts: Vec<usize>,
    num_parts: usize,
    parts: Vec<Vec<usize>>,
}

impl Partition {
    /// Validates an assignment: every index below `num_parts`, every part non-empty.
    pub fn from_assignment(element_parts: Vec<usize>, num_parts: usize) -> Result<Self> {
        let mut parts = vec![Vec::new(); num_parts];
        for (t, &p) in element_parts.iter().enumerate() {
            if p >= num_parts {
                return Err(Error::IndexOutOfRange {
                    index: p,
                    dim: num_parts,
                });
            }
            parts[p].push(t);
        }
        if let Some(empty) = parts.iter().position(Vec::is_empty) {
            return Err(Error::Config(format!("subdomain {empty} has no elements")));
        }
        Ok(Self {
            element_parts,
            num_parts,
            parts,
        })
    }

    pub fn num_parts(&self) -> usize {
        self.num_parts
    }

    pub fn part_of(&self, element: usize) -> usize {
        self.element_parts[element]
    }

    pub fn element_parts(&self) -> &[usize] {
        &self.element_parts
    }

    /// Elements of subdomain `p`, ascending.
    pub fn elements(&self, p: usize) -> &[usize] {
        &self.parts[p]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.parts.iter().map(Vec::len).collect()
    }

    /// Whether every subdomain is connected through shared faces.
    pub fn is_face_connected(&self, dual: &[Vec<usize>]) -> bool {
        let mut seen = vec![false; self.element_parts.len()];
        for elems in &self.parts {
            let mut queue = VecDeque::from([elems[0]]);
            seen[elems[0]] = true;
            let mut count = 1;
            while let Some(t) = queue.pop_front() {
                for &s in &dual[t] {
                    if !seen[s] && self.element_parts[s] == self.element_parts[t] {
                        seen[s] = true;
                        count += 1;
                        queue.push_back(s);
                    }
                }
            }
            if count != elems.len() {
                return false;
            }
        }
        true
    }

    /// Reads one subdomain index per line (element order); `#` lines are comments.
    pub fn read<R: Read>(reader: R) -> Result<Self> {
        let mut assignment = Vec::new();
        for (i, line) in BufReader::new(reader).lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            assignment.push(t.parse::<usize>().map_err(|e| Error::Parse {
                line: i + 1,
                msg: e.to_string(),
            })?);
        }
        let n = assignment.iter().max().map_or(0, |m| m + 1);
        Self::from_assignment(assignment, n)
    }

    pub fn write<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = BufWriter::new(writer);
        for p in &self.element_parts {
            writeln!(w, "{p}")?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Recursive coordinate multisection of element centroids.
///
/// A box holding `parts` subdomains is cut into `q` slabs along the longest
/// axis of its centroid bounding box (lowest axis on ties), where `q` is the
/// smallest prime factor of `parts`. Centroids are ordered by the cut
/// coordinate, then lexicographically, then by element index, and the slabs
/// receive equal shares. For powers of two this is median bisection.
pub fn partition_elements(mesh: &Mesh, num_parts: usize) -> Result<Partition> {
    let ne = mesh.num_tets();
    if num_parts == 0 || num_parts > ne {
        return Err(Error::TooManySubdomains {
            parts: num_parts,
            elements: ne,
        });
    }
    let centroids: Vec<[f64; 3]> = (0..ne).map(|t| mesh.tet_centroid(t)).collect();
    let mut assignment = vec![0; ne];
    multisect((0..ne).collect(), num_parts, 0, &centroids, &mut assignment);
    Partition::from_assignment(assignment, num_parts)
}

fn smallest_prime_factor(n: usize) -> usize {
    (2..=n).find(|d| n % d == 0).unwrap_or(n)
}

fn multisect(mut elems: Vec<usize>, parts: usize, first: usize, c: &[[f64; 3]], out: &mut [usize]) {
    if parts == 1 {
        for t in elems {
            out[t] = first;
        }
        return;
    }
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for &t in &elems {
        for d in 0..3 {
            lo[d] = lo[d].min(c[t][d]);
            hi[d] = hi[d].max(c[t][d]);
        }
    }
    let mut axis = 0;
    for d in 1..3 {
        if hi[d] - lo[d] > hi[axis] - lo[axis] {
            axis = d;
        }
    }
    elems.sort_by(|&a, &b| {
        c[a][axis]
            .total_cmp(&c[b][axis])
            .then(c[a][0].total_cmp(&c[b][0]))
            .then(c[a][1].total_cmp(&c[b][1]))
            .then(c[a][2].total_cmp(&c[b][2]))
            .then(a.cmp(&b))
    });
    let q = smallest_prime_factor(parts);
    let sub = parts / q;
    let len = elems.len();
    for g in 0..q {
        let (s, e) = (len * g / q, len * (g + 1) / q);
        multisect(elems[s..e].to_vec(), sub, first + g * sub, c, out);
    }
}
