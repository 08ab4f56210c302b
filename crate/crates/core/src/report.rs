//! Sweeps of the statement registry over a catalog, and their JSONL/CSV
//! reports.

use std::io::{self, Write};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::NearRing;
use crate::theorems::{structure_id, CheckOptions, PremiseRoute, SpecId, Status, StructureContext, TheoremSpec, Verdict, Witness};

/// One verdict as a report line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportRow {
    pub structure: String,
    pub spec: SpecId,
    pub derivation: Option<usize>,
    pub status: Status,
    pub witness: Option<Witness>,
    /// Wall time of the (structure, spec) check; absent in canonical mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_us: Option<u64>,
}

impl ReportRow {
    fn from_verdict(v: Verdict, timing_us: Option<u64>) -> Self {
        Self {
            structure: v.structure,
            spec: v.spec,
            derivation: v.derivation,
            status: v.status,
            witness: v.witness,
            timing_us,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SweepOptions {
    /// Omit timings so identical inputs give byte-identical reports.
    pub canonical: bool,
    pub route: PremiseRoute,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counts {
    pub skipped: usize,
    pub verified: usize,
    pub refuted: usize,
}

#[derive(Clone, Debug, Default)]
pub struct SweepReport {
    pub rows: Vec<ReportRow>,
}

/// Runs every spec on every structure. Rows come out in catalog order,
/// then spec order, then derivation order.
pub fn sweep(catalog: &[NearRing], specs: &[TheoremSpec], opts: SweepOptions) -> SweepReport {
    let check = CheckOptions {
        drop: Default::default(),
        route: opts.route,
    };
    let rows = catalog
        .par_iter()
        .map(|n| {
            let ctx = StructureContext::new(n, structure_id(n));
            let mut rows = Vec::new();
            for spec in specs {
                let start = Instant::now();
                let verdicts = ctx.check(spec, &check);
                let timing = (!opts.canonical).then(|| start.elapsed().as_micros() as u64);
                rows.extend(verdicts.into_iter().map(|v| ReportRow::from_verdict(v, timing)));
            }
            rows
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    SweepReport { rows }
}

impl SweepReport {
    pub fn counts(&self) -> Counts {
        let mut c = Counts::default();
        for row in &self.rows {
            match row.status {
                Status::Skipped => c.skipped += 1,
                Status::Verified => c.verified += 1,
                Status::Refuted => c.refuted += 1,
            }
        }
        c
    }

    pub fn refuted(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| r.status == Status::Refuted)
    }

    pub fn has_refuted(&self) -> bool {
        self.refuted().next().is_some()
    }

    pub fn write_jsonl(&self, mut w: impl Write) -> io::Result<()> {
        for row in &self.rows {
            serde_json::to_writer(&mut w, row)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn write_csv(&self, w: impl Write) -> io::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["structure", "spec", "derivation", "status", "witness", "timing_us"])?;
        for row in &self.rows {
            out.write_record([
                row.structure.clone(),
                row.spec.to_string(),
                row.derivation.map(|d| d.to_string()).unwrap_or_default(),
                row.status.to_string(),
                row.witness.as_ref().map(ToString::to_string).unwrap_or_default(),
                row.timing_us.map(|t| t.to_string()).unwrap_or_default(),
            ])?;
        }
        out.flush()
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8")
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::theorems::registry;

    #[test]
    fn empty_catalog_gives_empty_report() {
        let r = sweep(&[], &registry(), SweepOptions::default());
        assert!(r.rows.is_empty());
        assert_eq!(r.to_jsonl(), "");
    }

    #[test]
    fn fixtures_sweep_clean() {
        let r = sweep(&fixtures::all(), &registry(), SweepOptions { canonical: true, ..Default::default() });
        assert_eq!(r.counts().refuted, 0);
        assert!(r.counts().verified > 0);
        let csv_lines = r.to_csv().lines().count();
        assert_eq!(csv_lines, r.rows.len() + 1);
        assert_eq!(r.to_jsonl().lines().count(), r.rows.len());
        assert!(!r.to_jsonl().contains("timing_us"));
    }

    #[test]
    fn timings_present_outside_canonical_mode() {
        let r = sweep(&[fixtures::z2_field()], &registry(), SweepOptions::default());
        assert!(r.rows.iter().all(|row| row.timing_us.is_some()));
    }

    #[test]
    fn jsonl_row_schema() {
        let r = sweep(&[fixtures::z2_field()], &registry()[..1], SweepOptions { canonical: true, ..Default::default() });
        assert_eq!(
            r.to_jsonl(),
            "{\"structure\":\"Z2_FIELD\",\"spec\":\"L1a\",\"derivation\":null,\"status\":\"Verified\",\"witness\":null}\n"
        );
    }
}
