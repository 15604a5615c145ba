//! Density thresholds, the best-known-k table, and δ accounting.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::geometry::TileShape;
use crate::tiling::{Provenance, TilingConfig, TilingSolution};

/// Asymptotic density thresholds for the three tile families.
#[derive(Clone, Copy, Debug)]
pub struct Thresholds {
    /// Hexagonal tiles: `(1 + 2/sqrt(3))^2`.
    pub tau1: f64,
    /// Disc tiles: `8 sqrt(3) / pi`.
    pub tau2: f64,
    /// Croft's rounded hexagon, minimized over the corner angle.
    pub tau3: f64,
    /// Argmin of the Croft expression on `[0, pi/6]`.
    pub theta_star: f64,
}

pub fn tau1() -> f64 {
    (1.0 + 2.0 / 3.0_f64.sqrt()).powi(2)
}

/// Croft's density ratio as a function of the corner angle.
pub fn croft_ratio(theta: f64) -> f64 {
    let num = (1.0 + theta.cos()).powi(2) / 3.0_f64.sqrt();
    let den = std::f64::consts::PI / 6.0 - theta + (2.0 * theta).sin() / 2.0;
    num / den
}

pub fn thresholds() -> Thresholds {
    static CACHE: OnceLock<Thresholds> = OnceLock::new();
    *CACHE.get_or_init(|| {
        let (theta_star, tau3) =
            crate::scalar::golden_min(croft_ratio, 0.0, std::f64::consts::PI / 6.0, 1e-12);
        Thresholds {
            tau1: tau1(),
            tau2: 8.0 * 3.0_f64.sqrt() / std::f64::consts::PI,
            tau3,
            theta_star,
        }
    })
}

/// Fractional part forced by integrality: `f = ceil(tau1*m) - tau1*m`.
pub fn delta_fraction(m: u32) -> f64 {
    let x = tau1() * m as f64;
    x.ceil() - x
}

/// Empirical predictor for the probable deviation `delta = k - tau1*m`.
pub fn predict_delta(m: u32) -> f64 {
    let f = delta_fraction(m);
    if m % 3 == 0 {
        f + 1.0
    } else {
        let step = (3.0 * f + m as f64).floor() as i64 % 3;
        f + step as f64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableEntry {
    pub k: u32,
    pub provenance: Provenance,
    pub solution: Option<TilingSolution>,
}

impl TableEntry {
    pub fn delta(&self, m: u32) -> f64 {
        self.k as f64 - tau1() * m as f64
    }

    pub fn big_delta(&self, m: u32) -> i64 {
        self.delta(m).floor() as i64
    }
}

/// Best-known color count per layer count.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SolutionTable {
    entries: BTreeMap<u32, TableEntry>,
}

impl SolutionTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Keep the better (smaller k) entry on collision.
    pub fn insert(&mut self, m: u32, entry: TableEntry) {
        match self.entries.get(&m) {
            Some(existing) if existing.k <= entry.k => {}
            _ => {
                self.entries.insert(m, entry);
            }
        }
    }

    pub fn get(&self, m: u32) -> Option<&TableEntry> {
        self.entries.get(&m)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &TableEntry)> {
        self.entries.iter().map(|(m, e)| (*m, e))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Superimposing tilings adds both `m` and `k`, so the best table is the
    /// pointwise minimum over all decompositions. One ascending pass is a
    /// complete dynamic program and the result is a fixed point.
    pub fn combine_closure(&self, m_max: u32) -> SolutionTable {
        let mut closed = self.clone();
        for m in 2..=m_max {
            let mut best: Option<(u32, u32, u32)> = None;
            for m1 in 1..=m / 2 {
                let m2 = m - m1;
                if let (Some(e1), Some(e2)) = (closed.entries.get(&m1), closed.entries.get(&m2)) {
                    let k = e1.k + e2.k;
                    if best.map_or(true, |(bk, _, _)| k < bk) {
                        best = Some((k, m1, m2));
                    }
                }
            }
            if let Some((k, m1, m2)) = best {
                let improves = closed.entries.get(&m).map_or(true, |e| k < e.k);
                if improves {
                    closed.entries.insert(
                        m,
                        TableEntry { k, provenance: Provenance::Combined(m1, m2), solution: None },
                    );
                }
            }
        }
        closed
    }
}

/// Per-class histogram of deviations and predictor violations.
#[derive(Clone, Debug)]
pub struct DeltaStats {
    /// (m mod 3, m, delta) for every entry in range.
    pub deltas: Vec<(u32, u32, f64)>,
    /// Counts of delta binned at width 1/3 over [0, 4), per residue class.
    pub histogram: [Vec<usize>; 3],
    /// Entries whose floor(delta) differs from floor(predicted delta).
    pub violations: Vec<u32>,
    pub violation_rate: f64,
    /// Entries falling outside the usual band `delta in (0.35, 3)`.
    pub exceptions: Vec<u32>,
    pub rule: &'static str,
}

/// The comparison rule: predicted and actual delta share the fraction
/// `f = ceil(tau1*m) - tau1*m` by construction, so a violation is an integer
/// disagreement `floor(delta) != floor(predicted)`.
const PREDICTOR_RULE: &str =
    "violation iff floor(k - tau1*m) != floor(predict_delta(m)); band exceptions are \
entries with delta outside (0.35, 3)";

pub fn delta_stats(
    table: &SolutionTable,
    range: std::ops::RangeInclusive<u32>,
) -> DeltaStats {
    let mut stats = DeltaStats {
        deltas: Vec::new(),
        histogram: std::array::from_fn(|_| Vec::new()),
        violations: Vec::new(),
        violation_rate: 0.0,
        exceptions: Vec::new(),
        rule: PREDICTOR_RULE,
    };
    for class in &mut stats.histogram {
        class.resize(12, 0);
    }
    let mut total = 0usize;
    for (m, entry) in table.iter() {
        if !range.contains(&m) {
            continue;
        }
        total += 1;
        let delta = entry.delta(m);
        let class = (m % 3) as usize;
        stats.deltas.push((m % 3, m, delta));
        let bin = ((delta / (1.0 / 3.0)).floor() as isize).clamp(0, 11) as usize;
        stats.histogram[class][bin] += 1;
        if entry.big_delta(m) != predict_delta(m).floor() as i64 {
            stats.violations.push(m);
        }
        if delta <= 0.35 || delta >= 3.0 {
            stats.exceptions.push(m);
        }
    }
    if total > 0 {
        stats.violation_rate = stats.violations.len() as f64 / total as f64;
    }
    stats
}

/// One printed row of the best-found-tilings table.
#[derive(Clone, Copy, Debug)]
pub struct TableRow {
    pub m: u32,
    pub k: u32,
    /// Earlier regular-hexagon bound, carried as reference data only.
    pub k_star: u32,
    pub i1: i64,
    pub j1: i64,
    pub i2: i64,
    pub j2: i64,
    pub r: u32,
    pub s: u32,
    pub t: u32,
    pub w: f64,
    pub u: f64,
    pub d: f64,
    pub wavy: bool,
}

impl TableRow {
    pub fn config(&self) -> TilingConfig {
        TilingConfig {
            m: self.m,
            k: self.k,
            i1: self.i1,
            j1: self.j1,
            i2: self.i2,
            j2: self.j2,
            r: self.r,
            s: self.s,
            t: self.t,
        }
    }

    pub fn shape(&self) -> TileShape {
        TileShape { w: self.w, u: self.u }
    }

    pub fn solution(&self) -> TilingSolution {
        TilingSolution {
            config: self.config(),
            shape: self.shape(),
            d: self.d,
            wavy: self.wavy,
            wavy_d: self.wavy.then_some(self.d),
            provenance: Provenance::Explicit,
        }
    }
}

#[rustfmt::skip]
const TABLE1: &[(u32, u32, u32, i64, i64, i64, i64, u32, u32, u32, f64, f64, f64, bool)] = &[
    // m, k, k*, i1, j1, i2, j2, r, s, t, w, u, d, wavy
    ( 1,   7,   7,  3, -1,  1,  2,  1, 1,  0, 0.866025, 0.433013, 1.3229, false),
    ( 2,  11,  12,  5, -1,  1,  2,  2, 1,  0, 0.780412, 0.231291, 1.0550, false),
    ( 3,  16,  16,  8,  0,  3,  2,  3, 1,  1, 0.607271, 0.303636, 1.0121, false),
    ( 4,  21,  24,  5, -1,  1,  4,  2, 2,  0, 0.866025, 0.433013, 1.0825, false),
    ( 5,  26,  32, 13,  0,  3,  2,  5, 1,  1, 0.626508, 0.272476, 1.0024, false),
    ( 6,  29,  32,  7, -1,  1,  4,  3, 2,  0, 0.831425, 0.322944, 1.0009, true),
    ( 6,  29,  32,  7, -1,  1,  4,  3, 2,  0, 0.831379, 0.327403, 0.9994, false),
    ( 6,  31,  32,  7, -1,  3,  4,  3, 2,  1, 0.894452, 0.362876, 1.0716, false),
    ( 7,  36,  37, 16, -3, 12,  0,  7, 1,  5, 0.871616, 0.243410, 1.0163, false),
    ( 8,  39,  45, 19, -2, 10,  1,  8, 1,  4, 0.792258, 0.321035, 1.0091, false),
    ( 9,  43,  49,  7, -1,  1,  6,  3, 3,  0, 0.866025, 0.433013, 1.0104, false),
    (10,  49,  55, 12, -1,  1,  4,  5, 2,  0, 0.765621, 0.310729, 1.0097, false),
    (11,  53,  72, 25, -4,  7,  1, 11, 1,  3, 0.928440, 0.477605, 1.0080, false),
    (12,  57,  63,  9, -1,  3,  6,  4, 3,  1, 0.885280, 0.397978, 1.0071, false),
    (13,  63,  87, 30, -3, 21,  0, 13, 1,  9, 0.866025, 0.433013, 1.0326, false),
    (14,  67,  80, 31, -4,  9,  1, 14, 1,  4, 0.931056, 0.445051, 1.0034, false),
    (15,  71,  77, 11, -1,  5,  6,  5, 3,  2, 0.898147, 0.379766, 1.0018, false),
    (16,  77,  81,  9, -1,  5,  8,  4, 4,  2, 0.911429, 0.475233, 1.0205, false),
    (17,  81, 111, 39, -4, 30, -1, 17, 1, 13, 0.872477, 0.475928, 1.0171, false),
    (18,  86,  91, 14, -2,  1,  6,  6, 3,  0, 0.866025, 0.433013, 1.0104, false),
    (19,  91, 123, 43, -3, 16,  1, 19, 1,  7, 0.866025, 0.433013, 1.0256, false),
    (20,  95,  99, 22, -1,  7,  4, 10, 2,  3, 0.868899, 0.341116, 1.0086, false),
    (21,  99, 112, 48, -5, 39, -2, 21, 1, 17, 0.875384, 0.503138, 1.0057, false),
    (22, 103, 120, 49, -3, 18,  1, 22, 1,  8, 0.861306, 0.398575, 1.0027, false),
    (23, 109, 150, 51, -2, 29,  1, 23, 1, 13, 0.858033, 0.367470, 1.0126, false),
    (24, 113, 117, 53, -3, 20,  1, 24, 1,  9, 0.878789, 0.419435, 1.0094, false),
    (25, 119, 121, 11, -1,  9, 10,  5, 5,  4, 0.922862, 0.495630, 1.0083, false),
    (26, 123, 144, 29, -2, 18,  3, 13, 2,  8, 0.883319, 0.478525, 1.0135, false),
    (27, 127, 140, 20, -1,  7,  6,  9, 3,  3, 0.866025, 0.433013, 1.0104, false),
    (28, 131, 144, 61, -2, 35,  1, 28, 1, 16, 0.871101, 0.367408, 1.0004, false),
    (29, 137, 189, 65, -4, 18,  1, 29, 1,  8, 0.869685, 0.484585, 1.0128, false),
    (30, 141, 143, 33, -1,  9,  4, 15, 2,  4, 0.864112, 0.407710, 1.0098, false),
    (31, 145, 201, 69, -5, 29,  0, 31, 1, 13, 0.882489, 0.495857, 1.0018, false),
    (32, 151, 162, 70, -1, 11,  2, 32, 1,  5, 0.864953, 0.409509, 1.0143, false),
    (33, 155, 168, 72, -1, 11,  2, 33, 1,  5, 0.863131, 0.387042, 1.0083, false),
    (34, 159, 184, 75, -2, 42,  1, 34, 1, 19, 0.854345, 0.418193, 1.0056, false),
    (35, 165, 176, 76, -1, 13,  2, 35, 1,  6, 0.876328, 0.469624, 1.0131, false),
    (36, 169, 169, 13,  0,  0, 13,  6, 6,  0, 0.866025, 0.433013, 1.0104, false),
    (37, 173, 240, 80, -1, 13,  2, 37, 1,  6, 0.875603, 0.426892, 1.0061, false),
    (38, 177, 205, 82, -1, 13,  2, 38, 1,  6, 0.874272, 0.406629, 1.0016, false),
    (39, 183, 203, 83, -1, 17,  2, 39, 1,  8, 0.901827, 0.448498, 1.0059, false),
    (40, 187, 198, 85, -1, 17,  2, 40, 1,  8, 0.900383, 0.428203, 1.0022, false),
];

/// The published best-found tilings for `m <= 40`; `m = 6` appears three
/// ways (wavy k=29, the invalid straight k=29, and straight k=31).
pub fn table1_rows() -> Vec<TableRow> {
    TABLE1
        .iter()
        .map(|&(m, k, k_star, i1, j1, i2, j2, r, s, t, w, u, d, wavy)| TableRow {
            m, k, k_star, i1, j1, i2, j2, r, s, t, w, u, d, wavy,
        })
        .collect()
}

/// Reference bound per m from the earlier regular-hexagon construction.
pub fn k_star(m: u32) -> Option<u32> {
    TABLE1.iter().find(|row| row.0 == m).map(|row| row.2)
}

/// Best valid entry per m from the published table.
pub fn table1() -> SolutionTable {
    let mut table = SolutionTable::new();
    for row in table1_rows() {
        let sol = row.solution();
        if sol.effective_d() >= crate::tiling::VALID_D {
            table.insert(
                row.m,
                TableEntry { k: row.k, provenance: Provenance::Explicit, solution: Some(sol) },
            );
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_values() {
        let t = thresholds();
        assert!((t.tau1 - 4.642734410).abs() < 1e-9);
        assert!((t.tau2 - 4.410631163).abs() < 1e-9);
        assert!((t.tau3 - 4.359868202).abs() < 1e-9);
        assert!(t.tau3 < t.tau2 && t.tau2 < t.tau1);
    }

    #[test]
    fn croft_minimum_matches_grid_scan() {
        let t = thresholds();
        let n = 1_000_000;
        let hi = std::f64::consts::PI / 6.0;
        let mut best = (0.0, f64::INFINITY);
        for i in 0..=n {
            let theta = hi * i as f64 / n as f64;
            let v = croft_ratio(theta);
            if v < best.1 {
                best = (theta, v);
            }
        }
        assert!((t.tau3 - best.1).abs() < 1e-8, "golden {} vs scan {}", t.tau3, best.1);
        assert!((t.theta_star - best.0).abs() < 1e-5);
    }

    #[test]
    fn croft_endpoints_recover_other_thresholds() {
        let t = thresholds();
        assert!((croft_ratio(0.0) - t.tau2).abs() < 1e-9, "theta=0 is the disc limit");
        assert!(
            (croft_ratio(std::f64::consts::PI / 6.0) - t.tau1).abs() < 1e-9,
            "theta=pi/6 is the hexagon limit"
        );
    }

    #[test]
    fn predictor_matches_table_deltas() {
        assert!((predict_delta(1) - 2.3573).abs() < 1e-4);
        assert!((predict_delta(2) - 1.7145).abs() < 1e-4);
        assert!((predict_delta(6) - 1.1436).abs() < 1e-4);
    }

    #[test]
    fn predictor_step_in_range() {
        for m in 1..=2000 {
            let diff = predict_delta(m) - delta_fraction(m);
            let rounded = diff.round();
            assert!((diff - rounded).abs() < 1e-9);
            assert!((0.0..=2.0).contains(&rounded), "m={m} step={rounded}");
        }
    }

    #[test]
    fn table_deltas_match_printed_values() {
        // The printed delta column is k - tau1*m rounded to four decimals.
        let printed: &[(u32, f64)] = &[
            (1, 2.3573),
            (2, 1.7145),
            (7, 3.5009),
            (22, 0.8598),
            (38, 0.5761),
            (40, 1.2906),
        ];
        for &(m, delta) in printed {
            let entry = table1().get(m).cloned().unwrap();
            assert!(
                (entry.delta(m) - delta).abs() < 1e-4,
                "m={m}: {} vs printed {delta}",
                entry.delta(m)
            );
        }
    }

    #[test]
    fn combine_example_m9() {
        let mut table = SolutionTable::new();
        table.insert(6, TableEntry { k: 29, provenance: Provenance::Explicit, solution: None });
        table.insert(3, TableEntry { k: 16, provenance: Provenance::Explicit, solution: None });
        let closed = table.combine_closure(9);
        assert_eq!(closed.get(9).unwrap().k, 45);
        assert_eq!(closed.get(9).unwrap().provenance, Provenance::Combined(3, 6));

        // An explicit better entry survives the closure.
        let mut with_explicit = table.clone();
        with_explicit
            .insert(9, TableEntry { k: 43, provenance: Provenance::Explicit, solution: None });
        let closed = with_explicit.combine_closure(9);
        assert_eq!(closed.get(9).unwrap().k, 43);
        assert_eq!(closed.get(9).unwrap().provenance, Provenance::Explicit);
    }

    #[test]
    fn combine_example_m12() {
        let mut table = SolutionTable::new();
        table.insert(6, TableEntry { k: 29, provenance: Provenance::Explicit, solution: None });
        let closed = table.combine_closure(12);
        assert_eq!(closed.get(12).unwrap().k, 58);
        assert_eq!(table1().combine_closure(12).get(12).unwrap().k, 57, "explicit 57 is better");
    }

    #[test]
    fn closure_idempotent_and_subadditive() {
        let closed = table1().combine_closure(200);
        let twice = closed.combine_closure(200);
        assert_eq!(closed, twice);
        for (m1, e1) in closed.iter() {
            for (m2, e2) in closed.iter() {
                let m = m1 + m2;
                if m > 200 {
                    continue;
                }
                let sum = e1.k + e2.k;
                assert!(
                    closed.get(m).unwrap().k <= sum,
                    "subadditivity failed at {m1}+{m2}"
                );
            }
        }
    }

    #[test]
    fn closure_never_increases_k() {
        let table = table1();
        let closed = table.combine_closure(40);
        for (m, entry) in table.iter() {
            assert!(closed.get(m).unwrap().k <= entry.k);
        }
    }

    #[test]
    fn delta_stats_flags_m7() {
        let stats = delta_stats(&table1(), 1..=40);
        assert!(stats.exceptions.contains(&7), "m=7 has delta 3.5009");
        for (_, m, delta) in &stats.deltas {
            assert!(*delta > 0.35 && *delta <= 3.501, "m={m} delta={delta}");
        }
        let max = stats.deltas.iter().map(|(_, _, d)| *d).fold(0.0f64, f64::max);
        assert!((max - 3.5009).abs() < 1e-4);
    }

    #[test]
    fn delta_stats_empty_range() {
        let stats = delta_stats(&table1(), 1000..=1001);
        assert!(stats.deltas.is_empty());
        assert!(stats.violations.is_empty());
        assert_eq!(stats.violation_rate, 0.0);
    }

    #[test]
    fn table1_has_42_rows_and_40_values() {
        let rows = table1_rows();
        assert_eq!(rows.len(), 42);
        assert_eq!(table1().len(), 40);
        assert_eq!(rows.iter().filter(|r| r.m == 6).count(), 3);
        assert_eq!(rows.iter().filter(|r| r.wavy).count(), 1);
        for row in &rows {
            row.config().validate().expect("table row config");
        }
    }
}
