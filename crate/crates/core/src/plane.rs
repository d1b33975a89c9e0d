//! Affine planes F² over a finite field, with their parallel classes.

use serde::Serialize;
use thiserror::Error;

use crate::field::{FieldSummary, FiniteField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlaneError {
    #[error("affine plane axiom violated: {0}")]
    AxiomViolated(String),
}

/// A line as a sorted list of point ids, tagged with its parallel class.
/// Classes `0..k` are the slopes in field-element order; class `k` is vertical.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Line {
    pub class: u32,
    pub points: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct AffinePlane {
    field: FiniteField,
    points: Vec<(u32, u32)>,
    lines: Vec<Line>,
    classes: Vec<Vec<usize>>,
}

/// Builds the plane whose points are F² (id `x * k + y`) and whose lines are
/// `y = m x + b` plus the verticals `x = x0`, then audits the axioms.
pub fn affine_plane(field: &FiniteField) -> Result<AffinePlane, PlaneError> {
    let k = field.order();
    let id = |x: u32, y: u32| (x * k + y) as usize;
    let points: Vec<(u32, u32)> = (0..k).flat_map(|x| (0..k).map(move |y| (x, y))).collect();

    let mut lines = Vec::with_capacity((k * (k + 1)) as usize);
    let mut classes = Vec::with_capacity(k as usize + 1);
    for slope in 0..k {
        let mut class = Vec::with_capacity(k as usize);
        for b in 0..k {
            let mut pts: Vec<usize> = (0..k).map(|x| id(x, field.add(field.mul(slope, x), b))).collect();
            pts.sort_unstable();
            class.push(lines.len());
            lines.push(Line { class: slope, points: pts });
        }
        classes.push(class);
    }
    let mut vertical = Vec::with_capacity(k as usize);
    for x0 in 0..k {
        vertical.push(lines.len());
        lines.push(Line { class: k, points: (0..k).map(|y| id(x0, y)).collect() });
    }
    classes.push(vertical);

    let plane = AffinePlane { field: field.clone(), points, lines, classes };
    plane.verify_axioms()?;
    Ok(plane)
}

impl AffinePlane {
    pub fn order(&self) -> u32 {
        self.field.order()
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    /// Coordinates of every point, indexed by point id.
    pub fn points(&self) -> &[(u32, u32)] {
        &self.points
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    /// Line ids of each parallel class.
    pub fn parallel_classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn contains(&self, line: usize, point: usize) -> bool {
        self.lines[line].points.binary_search(&point).is_ok()
    }

    /// Line ids through `point`, ascending.
    pub fn lines_through(&self, point: usize) -> Vec<usize> {
        (0..self.lines.len()).filter(|&l| self.contains(l, point)).collect()
    }

    /// Checks line size, unique joining lines, a non-collinear triple, the
    /// parallel axiom, k+1 lines per point and the class partition.
    pub fn verify_axioms(&self) -> Result<(), PlaneError> {
        let k = self.order() as usize;
        let np = self.points.len();
        let fail = |msg: String| Err(PlaneError::AxiomViolated(msg));

        if np != k * k || self.lines.len() != k * (k + 1) || self.classes.len() != k + 1 {
            return fail(format!("{} points, {} lines, {} classes", np, self.lines.len(), self.classes.len()));
        }
        if let Some((i, l)) = self.lines.iter().enumerate().find(|(_, l)| l.points.len() != k) {
            return fail(format!("line {i} has {} points", l.points.len()));
        }

        let mut joins = vec![0u32; np * np];
        let mut degree = vec![0usize; np];
        for line in &self.lines {
            for (a_pos, &a) in line.points.iter().enumerate() {
                degree[a] += 1;
                for &b in &line.points[a_pos + 1..] {
                    joins[a * np + b] += 1;
                }
            }
        }
        for a in 0..np {
            for b in a + 1..np {
                if joins[a * np + b] != 1 {
                    return fail(format!("points {a} and {b} share {} lines", joins[a * np + b]));
                }
            }
        }
        if let Some(p) = degree.iter().position(|&d| d != k + 1) {
            return fail(format!("point {p} lies on {} lines", degree[p]));
        }

        // Points 0, 1 and k are (0,0), (0,1), (1,0).
        let collinear = self.lines.iter().any(|l| [0, 1, k].iter().all(|p| l.points.binary_search(p).is_ok()));
        if collinear {
            return fail("no non-collinear triple".into());
        }

        let mut seen = vec![false; self.lines.len()];
        for (c, class) in self.classes.iter().enumerate() {
            if class.len() != k {
                return fail(format!("class {c} has {} lines", class.len()));
            }
            let mut cover = vec![false; np];
            for &l in class {
                if std::mem::replace(&mut seen[l], true) {
                    return fail(format!("line {l} in two classes"));
                }
                for &p in &self.lines[l].points {
                    if std::mem::replace(&mut cover[p], true) {
                        return fail(format!("class {c} has intersecting lines"));
                    }
                }
            }
        }

        // Every class covers all points with disjoint lines, so the parallel
        // through p is the class-mate of l that contains p.
        let mut class_line = vec![usize::MAX; np * (k + 1)];
        for (c, class) in self.classes.iter().enumerate() {
            for &l in class {
                for &p in &self.lines[l].points {
                    class_line[p * (k + 1) + c] = l;
                }
            }
        }
        for (li, line) in self.lines.iter().enumerate() {
            let c = self.classes.iter().position(|cl| cl.contains(&li)).expect("lines are classified");
            for p in (0..np).filter(|p| line.points.binary_search(p).is_err()) {
                let parallel = class_line[p * (k + 1) + c];
                let disjoint = parallel != usize::MAX
                    && self.lines[parallel].points.iter().all(|q| line.points.binary_search(q).is_err());
                if !disjoint {
                    return fail(format!("no line through point {p} parallel to line {li}"));
                }
            }
        }
        Ok(())
    }

    pub fn to_dump(&self) -> PlaneDump {
        PlaneDump {
            order: self.order(),
            field: self.field.summary(),
            points: self.points.iter().map(|&(x, y)| [x, y]).collect(),
            lines: self.lines.iter().map(|l| l.points.clone()).collect(),
            classes: self.classes.clone(),
        }
    }
}

/// Serializable dump of a plane: point coordinates, lines as point-id arrays,
/// and classes as line-id arrays.
#[derive(Debug, Clone, Serialize)]
pub struct PlaneDump {
    pub order: u32,
    pub field: FieldSummary,
    pub points: Vec<[u32; 2]>,
    pub lines: Vec<Vec<usize>>,
    pub classes: Vec<Vec<usize>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{field_of_order, finite_field};

    #[test]
    fn small_planes_have_expected_counts() {
        for (k, lines) in [(2, 6), (3, 12), (4, 20)] {
            let plane = affine_plane(&field_of_order(k, None).unwrap()).unwrap();
            assert_eq!(plane.points().len(), (k * k) as usize);
            assert_eq!(plane.lines().len(), lines);
            assert_eq!(plane.parallel_classes().len(), k as usize + 1);
            assert!(plane.parallel_classes().iter().all(|c| c.len() == k as usize));
            for p in 0..plane.points().len() {
                assert_eq!(plane.lines_through(p).len(), k as usize + 1);
            }
        }
    }

    #[test]
    fn broken_plane_is_caught() {
        let f = finite_field(3, 1, None).unwrap();
        let mut plane = affine_plane(&f).unwrap();
        plane.lines[0].points[0] = plane.lines[0].points[1];
        assert!(plane.verify_axioms().is_err());
    }

    #[test]
    fn dump_lists_classes() {
        let plane = affine_plane(&finite_field(2, 1, None).unwrap()).unwrap();
        let json = serde_json::to_value(plane.to_dump()).unwrap();
        assert_eq!(json["classes"], serde_json::json!([[0, 1], [2, 3], [4, 5]]));
        assert_eq!(json["lines"][4], serde_json::json!([0, 1]));
    }
}
