//! Full sweep of an orientation snapshot.

use std::collections::HashMap;
use std::fmt;

use dwalk_core::orient::ForestSnapshot;
use dwalk_core::{EdgeClass, EdgeId, VertexId};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientationLimits {
    /// Cap on primary + secondary + bad out-edges of any vertex.
    pub max_out_degree: usize,
    pub allow_secondary: bool,
    pub allow_bad: bool,
}

impl OrientationLimits {
    /// Dancing-walk forests: `k` primaries plus one secondary.
    pub fn dancing(k: usize) -> Self {
        Self {
            max_out_degree: k + 1,
            allow_secondary: true,
            allow_bad: false,
        }
    }

    /// One half of a cuckoo bin.
    pub fn cuckoo() -> Self {
        Self {
            max_out_degree: 4,
            allow_secondary: true,
            allow_bad: true,
        }
    }

    pub fn primaries_only(max_out_degree: usize) -> Self {
        Self {
            max_out_degree,
            allow_secondary: false,
            allow_bad: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    /// An alive edge is held by no slot, or by more than one.
    SlotCount { edge: EdgeId, slots: usize },
    /// A slot names an edge that is not alive.
    DanglingSlot { vertex: VertexId, edge: EdgeId },
    OwnerNotEndpoint { edge: EdgeId, owner: VertexId },
    /// The slot holding an edge is not its owner's, or has the wrong class.
    WrongSlot { edge: EdgeId, vertex: VertexId, class: EdgeClass },
    TooManyPrimaries { vertex: VertexId, count: usize, k: usize },
    OutDegree { vertex: VertexId, degree: usize, cap: usize },
    SecondaryWithoutVolunteer { vertex: VertexId },
    ClassNotAllowed { edge: EdgeId, class: EdgeClass },
    SelfLoop { edge: EdgeId },
    /// Primary and secondary edges contain a cycle through this edge.
    Cycle { edge: EdgeId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SlotCount { edge, slots } => write!(f, "{edge} is held by {slots} slots"),
            Violation::DanglingSlot { vertex, edge } => {
                write!(f, "{vertex} holds {edge}, which is not alive")
            }
            Violation::OwnerNotEndpoint { edge, owner } => {
                write!(f, "{edge} is owned by {owner}, not one of its endpoints")
            }
            Violation::WrongSlot { edge, vertex, class } => {
                write!(f, "{edge} sits in a {class:?} slot of {vertex}, mismatching its record")
            }
            Violation::TooManyPrimaries { vertex, count, k } => {
                write!(f, "{vertex} has {count} primary edges, k = {k}")
            }
            Violation::OutDegree { vertex, degree, cap } => {
                write!(f, "{vertex} has out-degree {degree}, cap {cap}")
            }
            Violation::SecondaryWithoutVolunteer { vertex } => {
                write!(f, "{vertex} holds a secondary edge but has not volunteered")
            }
            Violation::ClassNotAllowed { edge, class } => {
                write!(f, "{edge} has class {class:?}, not allowed here")
            }
            Violation::SelfLoop { edge } => write!(f, "{edge} is a self-loop"),
            Violation::Cycle { edge } => write!(f, "{edge} closes a cycle of tree edges"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientationReport {
    pub violations: Vec<Violation>,
    pub max_out_degree: usize,
    pub edges: usize,
}

impl OrientationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for OrientationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok: {} edges, max out-degree {}", self.edges, self.max_out_degree);
        }
        writeln!(f, "{} violations:", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

pub fn check_orientation(snap: &ForestSnapshot, limits: OrientationLimits) -> OrientationReport {
    let mut report = OrientationReport {
        edges: snap.edges.len(),
        ..Default::default()
    };
    let out = &mut report.violations;
    let records: HashMap<EdgeId, _> = snap.edges.iter().map(|(id, e)| (*id, e)).collect();
    let mut held: HashMap<EdgeId, usize> = HashMap::new();

    for (i, slots) in snap.vertices.iter().enumerate() {
        let v = VertexId::new(i);
        if slots.primary.len() > snap.k {
            out.push(Violation::TooManyPrimaries {
                vertex: v,
                count: slots.primary.len(),
                k: snap.k,
            });
        }
        if slots.secondary.is_some() && !slots.volunteered {
            out.push(Violation::SecondaryWithoutVolunteer { vertex: v });
        }
        let held_here = slots
            .primary
            .iter()
            .map(|&e| (e, EdgeClass::Primary))
            .chain(slots.secondary.map(|e| (e, EdgeClass::Secondary)))
            .chain(slots.bad.map(|e| (e, EdgeClass::Bad)));
        let mut degree = 0;
        for (edge, class) in held_here {
            degree += 1;
            *held.entry(edge).or_default() += 1;
            match records.get(&edge) {
                None => out.push(Violation::DanglingSlot { vertex: v, edge }),
                Some(rec) if rec.owner != v || rec.class != class => {
                    out.push(Violation::WrongSlot { edge, vertex: v, class })
                }
                Some(_) => {}
            }
        }
        report.max_out_degree = report.max_out_degree.max(degree);
        if degree > limits.max_out_degree {
            out.push(Violation::OutDegree {
                vertex: v,
                degree,
                cap: limits.max_out_degree,
            });
        }
    }

    let mut parent: Vec<usize> = (0..snap.vertices.len()).collect();
    let mut sorted: Vec<_> = snap.edges.iter().collect();
    sorted.sort_by_key(|(id, _)| *id);
    for (id, rec) in sorted {
        let slots = held.get(id).copied().unwrap_or(0);
        if slots != 1 {
            out.push(Violation::SlotCount { edge: *id, slots });
        }
        let (a, b) = rec.endpoints;
        if rec.owner != a && rec.owner != b {
            out.push(Violation::OwnerNotEndpoint {
                edge: *id,
                owner: rec.owner,
            });
        }
        if a == b {
            out.push(Violation::SelfLoop { edge: *id });
        }
        let allowed = match rec.class {
            EdgeClass::Primary => true,
            EdgeClass::Secondary => limits.allow_secondary,
            EdgeClass::Bad => limits.allow_bad,
        };
        if !allowed {
            out.push(Violation::ClassNotAllowed {
                edge: *id,
                class: rec.class,
            });
        }
        if rec.class != EdgeClass::Bad && a.index() < parent.len() && b.index() < parent.len() {
            let (ra, rb) = (find(&mut parent, a.index()), find(&mut parent, b.index()));
            if ra == rb {
                out.push(Violation::Cycle { edge: *id });
            } else {
                parent[ra] = rb;
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use dwalk_core::{AlgoConfig, Orienter, Variant};

    fn star(n: u32) -> Orienter {
        let mut o = Orienter::new(AlgoConfig::new(Variant::DancingWalkRank, n as usize)).unwrap();
        for leaf in 1..n {
            o.insert_edge(VertexId(0), VertexId(leaf)).unwrap();
        }
        o
    }

    #[test]
    fn star_passes() {
        let r = check_orientation(&star(16).forest().snapshot(), OrientationLimits::dancing(2));
        assert!(r.is_ok(), "{r}");
        assert_eq!(r.edges, 15);
        assert_eq!(r.max_out_degree, 1);
    }

    #[test]
    fn duplicate_owner_is_reported_with_edge() {
        let mut snap = star(8).forest().snapshot();
        // Give edge e0 to a second vertex as well.
        let (id, rec) = snap.edges[0].clone();
        let other = rec.other(rec.owner);
        snap.vertices[other.index()].primary.push(id);
        let r = check_orientation(&snap, OrientationLimits::dancing(2));
        assert!(!r.is_ok());
        assert!(r.violations.contains(&Violation::SlotCount { edge: id, slots: 2 }));
        assert!(r.to_string().contains(&id.to_string()));
    }

    #[test]
    fn cap_and_class_checks() {
        let snap = star(8).forest().snapshot();
        assert!(check_orientation(&snap, OrientationLimits::primaries_only(1)).is_ok());
        assert!(!check_orientation(&snap, OrientationLimits::primaries_only(0)).is_ok());
    }

    #[test]
    fn cycle_detected() {
        let mut f = dwalk_core::OrientedForest::new(3, 2).unwrap();
        f.install_edge(VertexId(0), VertexId(1), VertexId(0), EdgeClass::Primary).unwrap();
        f.install_edge(VertexId(1), VertexId(2), VertexId(1), EdgeClass::Primary).unwrap();
        let c = f.install_edge(VertexId(2), VertexId(0), VertexId(2), EdgeClass::Primary).unwrap();
        let r = check_orientation(&f.snapshot(), OrientationLimits::dancing(2));
        assert_eq!(r.violations, vec![Violation::Cycle { edge: c }]);
    }

    #[test]
    fn dangling_and_volunteer() {
        let mut snap = star(4).forest().snapshot();
        snap.vertices[2].secondary = Some(EdgeId(99));
        let r = check_orientation(&snap, OrientationLimits::dancing(2));
        assert!(r.violations.contains(&Violation::DanglingSlot {
            vertex: VertexId(2),
            edge: EdgeId(99)
        }));
        assert!(r
            .violations
            .contains(&Violation::SecondaryWithoutVolunteer { vertex: VertexId(2) }));
    }
}
