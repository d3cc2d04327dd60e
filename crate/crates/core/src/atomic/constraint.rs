use crate::graph::{Graph, NodeId, Path};

/// Slack allowed when comparing accumulated resources against bounds.
pub const BOUND_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintKind {
    Upper,
    Range,
    Include,
}

/// One additional constraint over an additive resource.
///
/// `Include` is stored as a unit resource (1 on the out-arcs of `node`, 0
/// elsewhere) with both bounds at 1; see [`Graph::with_inclusion_resource`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSpec {
    pub kind: ConstraintKind,
    pub resource: usize,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub node: Option<NodeId>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConstraintError {
    #[error("resource index {0} out of range")]
    BadResource(usize),
    #[error("lower bound exceeds upper bound")]
    EmptyRange,
    #[error("missing or non-finite bound")]
    MissingBound,
    #[error("inclusion node {0} invalid or its resource column is not the unit marker of its out-arcs")]
    BadInclusion(NodeId),
}

impl ConstraintSpec {
    pub fn upper(resource: usize, upper: f64) -> Self {
        ConstraintSpec { kind: ConstraintKind::Upper, resource, lower: None, upper: Some(upper), node: None }
    }

    pub fn range(resource: usize, lower: f64, upper: f64) -> Self {
        ConstraintSpec { kind: ConstraintKind::Range, resource, lower: Some(lower), upper: Some(upper), node: None }
    }

    pub fn include(resource: usize, node: NodeId) -> Self {
        ConstraintSpec {
            kind: ConstraintKind::Include,
            resource,
            lower: Some(1.0),
            upper: Some(1.0),
            node: Some(node),
        }
    }

    /// Effective lower bound (0 for upper-only constraints).
    pub fn lower_bound(&self) -> f64 {
        match self.kind {
            ConstraintKind::Upper => 0.0,
            ConstraintKind::Range => self.lower.unwrap_or(0.0),
            ConstraintKind::Include => 1.0,
        }
    }

    pub fn upper_bound(&self) -> f64 {
        match self.kind {
            ConstraintKind::Include => 1.0,
            _ => self.upper.unwrap_or(f64::INFINITY),
        }
    }

    pub fn has_lower(&self) -> bool {
        self.lower_bound() > 0.0
    }

    pub fn admits(&self, total: f64) -> bool {
        let (lo, hi) = (self.lower_bound(), self.upper_bound());
        total >= lo - BOUND_TOL * (1.0 + lo.abs()) && total <= hi + BOUND_TOL * (1.0 + hi.abs())
    }

    pub fn validate(&self, g: &Graph) -> Result<(), ConstraintError> {
        if self.resource >= g.resource_count() {
            return Err(ConstraintError::BadResource(self.resource));
        }
        match self.kind {
            ConstraintKind::Upper => {
                if !self.upper.is_some_and(f64::is_finite) {
                    return Err(ConstraintError::MissingBound);
                }
            }
            ConstraintKind::Range => {
                let (Some(l), Some(u)) = (self.lower, self.upper) else {
                    return Err(ConstraintError::MissingBound);
                };
                if !l.is_finite() || !u.is_finite() {
                    return Err(ConstraintError::MissingBound);
                }
                if l > u {
                    return Err(ConstraintError::EmptyRange);
                }
            }
            ConstraintKind::Include => {
                let node = self.node.ok_or(ConstraintError::BadInclusion(usize::MAX))?;
                if node >= g.node_count() {
                    return Err(ConstraintError::BadInclusion(node));
                }
                let marks_ok = g.arcs().iter().all(|a| {
                    let want = if a.tail == node { 1.0 } else { 0.0 };
                    a.resources[self.resource] == want
                });
                if !marks_ok {
                    return Err(ConstraintError::BadInclusion(node));
                }
            }
        }
        Ok(())
    }

    /// Feasibility of an elementary s–t path for this constraint alone.
    pub fn check(&self, g: &Graph, path: &Path) -> bool {
        let total: f64 = path.arcs.iter().map(|&a| g.arc(a).resources[self.resource]).sum();
        self.admits(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::p2;

    #[test]
    fn bounds_by_kind() {
        let u = ConstraintSpec::upper(0, 9.0);
        assert_eq!((u.lower_bound(), u.upper_bound()), (0.0, 9.0));
        assert!(!u.has_lower());
        let r = ConstraintSpec::range(1, 3.0, 5.0);
        assert!(r.has_lower() && r.admits(3.0) && r.admits(5.0) && !r.admits(5.1));
        let i = ConstraintSpec::include(2, 1);
        assert!(i.admits(1.0) && !i.admits(0.0) && !i.admits(2.0));
    }

    #[test]
    fn validation() {
        let g = p2();
        assert!(ConstraintSpec::upper(1, 9.0).validate(&g).is_ok());
        assert_eq!(ConstraintSpec::upper(2, 9.0).validate(&g), Err(ConstraintError::BadResource(2)));
        assert_eq!(ConstraintSpec::range(0, 5.0, 4.0).validate(&g), Err(ConstraintError::EmptyRange));
        let (gi, j) = g.with_inclusion_resource(1);
        assert!(ConstraintSpec::include(j, 1).validate(&gi).is_ok());
        assert_eq!(ConstraintSpec::include(j, 2).validate(&gi), Err(ConstraintError::BadInclusion(2)));
    }

    #[test]
    fn include_on_p2() {
        let (g, j) = p2().with_inclusion_resource(1);
        let inc = ConstraintSpec::include(j, 1);
        assert!(inc.check(&g, &Path::new(vec![0, 1])));
        assert!(!inc.check(&g, &Path::new(vec![2, 3])));
    }
}
