//! Named residual norms with pass/fail verdicts.

use ndarray::{Array3, Axis as NdAxis};
use serde::{Deserialize, Serialize};

use crate::fieldcore::{norms_of, Grid2, NormPair};

/// Acceptance bound for one entry, compared against its `linf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    AtMost(f64),
    AtLeast(f64),
}

impl Bound {
    pub fn admits(self, v: f64) -> bool {
        match self {
            Bound::AtMost(t) => v <= t,
            Bound::AtLeast(t) => v >= t,
        }
    }
}

/// Per-node absolute residual on the `(x¹, x²)` grid, maximised over any
/// extra sample axis. Row-major, `i` outer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldDump {
    pub grid: Grid2,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualEntry {
    pub name: String,
    pub group: String,
    pub full: NormPair,
    pub interior: NormPair,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<Bound>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldDump>,
}

impl ResidualEntry {
    /// Entry from samples shaped `(n1, n2, layers)` on `grid`.
    pub fn from_samples(
        name: impl Into<String>,
        group: impl Into<String>,
        grid: &Grid2,
        samples: &Array3<f64>,
    ) -> Self {
        let abs = samples.mapv(f64::abs);
        let full = norms_of(&abs, false).unwrap_or_default();
        let interior = norms_of(&abs, true).unwrap_or(full);
        let plane = abs.fold_axis(NdAxis(2), 0.0, |&m, &v| if v.is_nan() || v > m { v } else { m });
        ResidualEntry {
            name: name.into(),
            group: group.into(),
            full,
            interior,
            bound: None,
            pass: None,
            field: Some(FieldDump { grid: *grid, values: plane.iter().copied().collect() }),
        }
    }

    /// Entry for a single measured quantity (no spatial structure).
    pub fn scalar(name: impl Into<String>, group: impl Into<String>, value: f64) -> Self {
        let n = NormPair { linf: value.abs(), l2: value.abs() };
        ResidualEntry {
            name: name.into(),
            group: group.into(),
            full: n,
            interior: n,
            bound: None,
            pass: None,
            field: None,
        }
    }

    pub fn with_bound(mut self, bound: Bound) -> Self {
        self.bound = Some(bound);
        self
    }

    pub fn measure(&self, interior_only: bool) -> f64 {
        if interior_only {
            self.interior.linf
        } else {
            self.full.linf
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ResidualReport {
    pub entries: Vec<ResidualEntry>,
}

impl ResidualReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, entry: ResidualEntry) {
        self.entries.push(entry);
    }

    pub fn extend(&mut self, other: ResidualReport) {
        self.entries.extend(other.entries);
    }

    /// Prefix every entry name, e.g. to separate `M` from `M′`.
    pub fn prefixed(mut self, prefix: &str) -> Self {
        for e in &mut self.entries {
            e.name = format!("{prefix}{}", e.name);
        }
        self
    }

    pub fn get(&self, name: &str) -> Option<&ResidualEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// `linf` of the named entry (full norm).
    pub fn linf(&self, name: &str) -> Option<f64> {
        self.get(name).map(|e| e.full.linf)
    }

    /// Largest full `linf` over entries of a group.
    pub fn group_linf(&self, group: &str) -> f64 {
        self.entries.iter().filter(|e| e.group == group).map(|e| e.full.linf).fold(0.0, f64::max)
    }

    /// Assign `AtMost(tol)` to entries without a bound and evaluate every verdict.
    pub fn judge(&mut self, tol: f64, interior_only: bool) {
        for e in &mut self.entries {
            let bound = *e.bound.get_or_insert(Bound::AtMost(tol));
            e.pass = Some(bound.admits(e.measure(interior_only)));
        }
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass == Some(true))
    }

    pub fn failures(&self) -> impl Iterator<Item = &ResidualEntry> {
        self.entries.iter().filter(|e| e.pass != Some(true))
    }
}
