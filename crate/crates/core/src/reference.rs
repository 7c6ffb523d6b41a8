//! Published reference spectra at `a = 6`, `b = 2` and their reproduction.
//!
//! Printed strengths carry four or five digits, so a strength tagged with
//! a seam state is first moved onto the nearby exact root of the matching
//! condition (if one lies within [`SNAP_WINDOW`]); otherwise the seam state
//! would come out as a generic level a hair away from the seam.

use crate::characteristic::{f_zero_energy, g_barrier_top};
use crate::error::Result;
use crate::exec::Execution;
use crate::model::{PotentialGeometry, StateKind};
use crate::rootfind::{refine, Bracket, Tolerances};
use crate::spectrum::{solve_spectrum, SpectrumRequest};

/// Relative window for moving a printed strength onto an exact root.
pub const SNAP_WINDOW: f64 = 0.01;
/// Tolerance for rows printed to four decimals.
pub const TIGHT_TOLERANCE: f64 = 1e-4;
/// Tolerance for the remaining rows.
pub const LOOSE_TOLERANCE: f64 = 2e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TableEntry {
    Value(f64),
    /// Printed as `0`: a zero-energy state.
    Zero,
    /// Printed as `V0`: a barrier-top state.
    BarrierTop,
}

impl TableEntry {
    fn expected_kind(self) -> StateKind {
        match self {
            TableEntry::Value(_) => StateKind::Generic,
            TableEntry::Zero => StateKind::ZeroEnergy,
            TableEntry::BarrierTop => StateKind::BarrierTop,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    pub label: u32,
    pub v0: f64,
    pub entries: [TableEntry; 6],
    /// Higher level listed as sitting on the barrier top.
    pub starred: Option<usize>,
    pub tolerance: f64,
}

use TableEntry::{BarrierTop as Top, Value as V, Zero};

pub const REFERENCE_TABLE: [TableRow; 11] = [
    TableRow {
        label: 1,
        v0: 0.0001,
        entries: [V(0.0685), V(0.2741), V(0.6169), V(1.0966), V(1.7135), V(2.4674)],
        starred: None,
        tolerance: TIGHT_TOLERANCE,
    },
    TableRow {
        label: 2,
        v0: 5.0,
        entries: [V(-3.733845), V(-0.4354), V(0.4972), V(0.7227), V(1.9639), V(2.3852)],
        starred: None,
        tolerance: LOOSE_TOLERANCE,
    },
    TableRow {
        label: 3,
        v0: 0.0655,
        entries: [Top, V(0.2756), V(0.6162), V(1.0979), V(1.7132), V(2.4678)],
        starred: None,
        tolerance: TIGHT_TOLERANCE,
    },
    TableRow {
        label: 4,
        v0: 0.2981,
        entries: [V(0.0124), Top, V(0.6057), V(1.1216), V(1.7088), V(2.4763)],
        starred: None,
        tolerance: TIGHT_TOLERANCE,
    },
    TableRow {
        label: 5,
        v0: 0.5816,
        entries: [V(-0.1096), V(0.3349), Top, V(1.1795), V(1.6970), V(2.5001)],
        starred: None,
        tolerance: TIGHT_TOLERANCE,
    },
    TableRow {
        label: 6,
        v0: 1.3322,
        entries: [V(-0.5809), V(0.4015), V(0.5112), Top, V(1.6639), V(2.6041)],
        starred: None,
        tolerance: TIGHT_TOLERANCE,
    },
    TableRow {
        label: 7,
        v0: 0.3333,
        entries: [Zero, V(0.3027), V(0.6032), V(1.1275), V(1.7077), V(2.4784)],
        starred: None,
        tolerance: TIGHT_TOLERANCE,
    },
    TableRow {
        label: 8,
        v0: 4.0998,
        entries: [V(-2.909757), Zero, V(0.4865), V(0.8392), V(1.9127), V(2.4882)],
        starred: Some(6),
        tolerance: LOOSE_TOLERANCE,
    },
    TableRow {
        label: 9,
        v0: 12.7396,
        entries: [V(-11.1434197), V(-6.510498), Zero, V(0.53823), V(0.88086), V(2.72435)],
        starred: Some(12),
        tolerance: LOOSE_TOLERANCE,
    },
    TableRow {
        label: 10,
        v0: 26.31113,
        entries: [V(-24.50234846), V(-19.139948039), V(-10.484039), Zero, V(0.560662), V(0.8940711)],
        starred: Some(17),
        tolerance: LOOSE_TOLERANCE,
    },
    TableRow {
        label: 12,
        v0: 0.3125,
        entries: [Zero, Top, V(0.6047), V(1.1240), V(1.7084), V(2.4771)],
        starred: None,
        tolerance: LOOSE_TOLERANCE,
    },
];

/// Exact root of `cond` within [`SNAP_WINDOW`] of `v0`, if any.
fn nearby_root(v0: f64, cond: impl Fn(f64) -> f64) -> Option<f64> {
    let (lo, hi) = (v0 * (1.0 - SNAP_WINDOW), v0 * (1.0 + SNAP_WINDOW));
    let n = 200;
    let xs: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
    xs.windows(2)
        .filter_map(|w| Bracket::new(w[0], w[1], cond(w[0]), cond(w[1])).ok())
        .filter_map(|br| refine(&cond, &br, &Tolerances::default()).ok())
        .map(|r| r.root)
        .min_by(|a, b| (a - v0).abs().total_cmp(&(b - v0).abs()))
}

/// Strength actually solved for a row.
pub fn snapped_v0(row: &TableRow) -> f64 {
    let g = PotentialGeometry::reference(1.0).expect("reference geometry");
    let wants = |e: TableEntry| row.entries.contains(&e);
    let f_root = || nearby_root(row.v0, |v| f_zero_energy(v, &g).unwrap_or(f64::NAN));
    let g_root = || nearby_root(row.v0, |v| g_barrier_top(v, &g).unwrap_or(f64::NAN));
    let snapped = match (wants(Zero), wants(Top)) {
        (true, _) => f_root().or_else(|| if wants(Top) { g_root() } else { None }),
        (false, true) => g_root(),
        _ => None,
    };
    snapped.unwrap_or(row.v0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReproducedEntry {
    pub row: u32,
    pub v0: f64,
    pub index: usize,
    pub published: f64,
    pub computed: f64,
    pub deviation: f64,
    pub kind: StateKind,
    pub expected_kind: StateKind,
    /// Entry from the starred column; reported, not part of the six-level check.
    pub starred: bool,
    pub tolerance: f64,
}

impl ReproducedEntry {
    pub fn passed(&self) -> bool {
        self.deviation.abs() <= self.tolerance && self.kind == self.expected_kind
    }
}

pub fn reproduce_row(row: &TableRow, exec: Execution) -> Result<Vec<ReproducedEntry>> {
    let v0 = snapped_v0(row);
    let geom = PotentialGeometry::reference(v0)?;
    let n = row.starred.map_or(6, |s| s + 1).max(6);
    let spectrum = solve_spectrum(&SpectrumRequest::count(geom, n).with_execution(exec))?;
    let entry = |index: usize, published: f64, expected_kind: StateKind, starred: bool| {
        let st = &spectrum.states[index];
        ReproducedEntry {
            row: row.label,
            v0,
            index,
            published,
            computed: st.energy,
            deviation: st.energy - published,
            kind: st.kind,
            expected_kind,
            starred,
            tolerance: row.tolerance,
        }
    };
    let mut out: Vec<ReproducedEntry> = row
        .entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let published = match *e {
                TableEntry::Value(x) => x,
                TableEntry::Zero => 0.0,
                TableEntry::BarrierTop => v0,
            };
            entry(i, published, e.expected_kind(), false)
        })
        .collect();
    if let Some(s) = row.starred {
        out.push(entry(s, v0, StateKind::BarrierTop, true));
    }
    Ok(out)
}

/// Every row, in table order.
pub fn reproduce_table(exec: Execution) -> Result<Vec<ReproducedEntry>> {
    let rows = exec.map(REFERENCE_TABLE.to_vec(), |row| reproduce_row(&row, Execution::Sequential));
    let mut out = Vec::new();
    for r in rows {
        out.extend(r?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snapping_moves_only_tagged_rows() {
        let by_label = |l: u32| REFERENCE_TABLE.iter().find(|r| r.label == l).unwrap();
        assert_eq!(snapped_v0(by_label(2)), 5.0);
        assert_eq!(snapped_v0(by_label(1)), 0.0001);
        let v = snapped_v0(by_label(3));
        assert!((v - 0.0655).abs() < 1e-4 && v != 0.0655);
        let v = snapped_v0(by_label(10));
        assert!((v - 26.31113).abs() < 1e-4);
        // no root of either condition within 1% of 0.3125
        assert_eq!(snapped_v0(by_label(12)), 0.3125);
    }

    #[test]
    fn row_three_reproduced() {
        let out = reproduce_row(&REFERENCE_TABLE[2], Execution::Sequential).unwrap();
        assert_eq!(out.len(), 6);
        assert!(out.iter().all(|e| e.passed()), "{out:?}");
        assert_eq!(out[0].kind, StateKind::BarrierTop);
    }

    #[test]
    fn starred_entry_is_reported() {
        let out = reproduce_row(&REFERENCE_TABLE[7], Execution::Parallel).unwrap();
        assert_eq!(out.len(), 7);
        let star = out.last().unwrap();
        assert!(star.starred);
        assert_eq!(star.index, 6);
    }
}
