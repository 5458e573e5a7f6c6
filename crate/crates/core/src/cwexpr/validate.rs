use std::collections::BTreeSet;
use std::fmt;

use rustc_hash::FxHashSet;

use super::{CwExpression, Label, Node, NodeId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// A join re-adds an edge that already exists.
    RedundantJoin {
        i: Label,
        j: Label,
        u: String,
        v: String,
    },
    /// A rename whose target class is empty at that point.
    RenameIntoEmpty {
        from: Label,
        to: Label,
    },
    LabelOutOfRange {
        label: Label,
        k: u32,
    },
    /// Warning: a join where one of the two classes is empty adds nothing.
    VacuousJoin {
        i: Label,
        j: Label,
    },
    /// Warning: a rename whose source class is empty changes nothing.
    VacuousRename {
        from: Label,
        to: Label,
    },
}

impl ViolationKind {
    pub fn is_warning(&self) -> bool {
        matches!(self, ViolationKind::VacuousJoin { .. } | ViolationKind::VacuousRename { .. })
    }

    pub fn code(&self) -> &'static str {
        match self {
            ViolationKind::RedundantJoin { .. } => "redundant-join",
            ViolationKind::RenameIntoEmpty { .. } => "rename-into-empty",
            ViolationKind::LabelOutOfRange { .. } => "label-out-of-range",
            ViolationKind::VacuousJoin { .. } => "vacuous-join",
            ViolationKind::VacuousRename { .. } => "vacuous-rename",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub node: NodeId,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "node {}: {}", self.node, self.kind.code())?;
        match &self.kind {
            ViolationKind::RedundantJoin { i, j, u, v } => {
                write!(f, " (join {i} {j} re-adds edge {u}-{v})")
            }
            ViolationKind::RenameIntoEmpty { from, to } => {
                write!(f, " (rename {from} {to}: class {to} is empty)")
            }
            ViolationKind::LabelOutOfRange { label, k } => write!(f, " (label {label} > k = {k})"),
            ViolationKind::VacuousJoin { i, j } => write!(f, " (join {i} {j} has an empty side)"),
            ViolationKind::VacuousRename { from, to } => {
                write!(f, " (rename {from} {to}: class {from} is empty)")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn kinds(&self) -> Vec<&'static str> {
        self.violations.iter().map(|v| v.kind.code()).collect()
    }
}

/// Simulates the expression bottom-up and reports every redundant join,
/// every rename into an empty class, and every label outside `[1, k]`.
pub fn validate(e: &CwExpression) -> ValidationReport {
    let mut report = ValidationReport::default();
    let k = e.k();
    let names: Vec<&str> = e.vertex_names();
    let mut vertex_id = 0usize;
    let mut label_of: Vec<Label> = Vec::with_capacity(names.len());
    let mut members: Vec<Vec<usize>> = Vec::with_capacity(e.len());
    let mut edges: FxHashSet<(usize, usize)> = FxHashSet::default();

    let push = |report: &mut ValidationReport, node: NodeId, kind: ViolationKind| {
        let v = Violation { node, kind };
        if v.kind.is_warning() {
            report.warnings.push(v);
        } else {
            report.violations.push(v);
        }
    };

    for (id, node) in e.nodes().iter().enumerate() {
        let mentioned: Vec<Label> = match *node {
            Node::Create { label, .. } => vec![label],
            Node::Union { .. } => Vec::new(),
            Node::Join { i, j, .. } => vec![i, j],
            Node::Rename { from, to, .. } => vec![from, to],
        };
        let out_of_range: BTreeSet<Label> = mentioned.into_iter().filter(|&l| l > k).collect();
        for label in out_of_range {
            push(&mut report, id, ViolationKind::LabelOutOfRange { label, k });
        }

        let m = match node {
            Node::Create { label, .. } => {
                label_of.push(*label);
                vertex_id += 1;
                vec![vertex_id - 1]
            }
            Node::Union { left, right } => {
                let mut m = std::mem::take(&mut members[*left]);
                m.append(&mut std::mem::take(&mut members[*right]));
                m
            }
            Node::Join { i, j, child } => {
                let m = std::mem::take(&mut members[*child]);
                let ci: Vec<usize> = m.iter().copied().filter(|&v| label_of[v] == *i).collect();
                let cj: Vec<usize> = m.iter().copied().filter(|&v| label_of[v] == *j).collect();
                if ci.is_empty() || cj.is_empty() {
                    push(&mut report, id, ViolationKind::VacuousJoin { i: *i, j: *j });
                }
                let mut reported = false;
                for &u in &ci {
                    for &v in &cj {
                        if !edges.insert((u.min(v), u.max(v))) && !reported {
                            reported = true;
                            push(
                                &mut report,
                                id,
                                ViolationKind::RedundantJoin {
                                    i: *i,
                                    j: *j,
                                    u: names[u].to_string(),
                                    v: names[v].to_string(),
                                },
                            );
                        }
                    }
                }
                m
            }
            Node::Rename { from, to, child } => {
                let m = std::mem::take(&mut members[*child]);
                if !m.iter().any(|&v| label_of[v] == *to) {
                    push(&mut report, id, ViolationKind::RenameIntoEmpty { from: *from, to: *to });
                }
                if !m.iter().any(|&v| label_of[v] == *from) {
                    push(&mut report, id, ViolationKind::VacuousRename { from: *from, to: *to });
                }
                for &v in &m {
                    if label_of[v] == *from {
                        label_of[v] = *to;
                    }
                }
                m
            }
        };
        members.push(m);
    }
    report
}
