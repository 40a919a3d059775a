//! Small triangulations used by tests, scenarios and the CLI.

use super::flag::SimplicialMap;
use super::simplicial::SimplicialComplex;

fn build(facets: &[&[&str]]) -> SimplicialComplex {
    let v: Vec<Vec<&str>> = facets.iter().map(|f| f.to_vec()).collect();
    SimplicialComplex::from_labeled(&v).expect("model triangulation")
}

pub fn point() -> SimplicialComplex {
    build(&[&["p"]])
}

/// Boundary of a triangle: a circle with vertices 0, 1, 2.
pub fn hollow_triangle() -> SimplicialComplex {
    build(&[&["0", "1"], &["1", "2"], &["0", "2"]])
}

pub fn disk_triangle() -> SimplicialComplex {
    build(&[&["0", "1", "2"]])
}

/// Octahedral 2-sphere.
pub fn octahedron() -> SimplicialComplex {
    let mut facets = Vec::new();
    for x in ["+x", "-x"] {
        for y in ["+y", "-y"] {
            for z in ["+z", "-z"] {
                facets.push(vec![x, y, z]);
            }
        }
    }
    SimplicialComplex::from_labeled(&facets).unwrap()
}

fn grid_label(i: usize, j: usize) -> String {
    format!("v{}{}", i % 3, j % 3)
}

/// 9-vertex torus: the 3x3 grid with opposite sides glued.
pub fn torus() -> SimplicialComplex {
    let mut facets = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            let a = grid_label(i, j);
            facets.push(vec![a.clone(), grid_label(i + 1, j), grid_label(i + 1, j + 1)]);
            facets.push(vec![a, grid_label(i, j + 1), grid_label(i + 1, j + 1)]);
        }
    }
    SimplicialComplex::from_labeled(&facets).unwrap()
}

/// 6-vertex real projective plane.
pub fn projective_plane() -> SimplicialComplex {
    build(&[
        &["1", "2", "3"],
        &["1", "3", "4"],
        &["1", "4", "5"],
        &["1", "5", "6"],
        &["1", "6", "2"],
        &["2", "3", "5"],
        &["3", "4", "6"],
        &["4", "5", "2"],
        &["5", "6", "3"],
        &["6", "2", "4"],
    ])
}

/// Projection of the 9-vertex torus onto the hollow triangle, `(i, j) ↦ i`.
pub fn torus_projection() -> (SimplicialComplex, SimplicialMap) {
    let t = torus();
    let circle = hollow_triangle();
    let pairs: Vec<(String, String)> = (0..3)
        .flat_map(|i| (0..3).map(move |j| (grid_label(i, j), i.to_string())))
        .collect();
    let f = SimplicialMap::from_labels(t.clone(), circle, &pairs).unwrap();
    (t, f)
}
