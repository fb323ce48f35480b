use std::io::Write;

/// Diagnostics of one ADMM iteration. Entries that do not exist for the
/// solver at hand (e.g. `d_d` for TNF) are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct IterRecord {
    pub k: usize,
    pub lagrangian: Option<f64>,
    pub res_feas: f64,
    pub res_lh: Option<f64>,
    pub res_ed: Option<f64>,
    pub d_l: f64,
    pub d_h: Option<f64>,
    pub d_e: f64,
    pub d_d: Option<f64>,
    pub d_y: Option<f64>,
    pub d_z: f64,
    pub d_u: Option<f64>,
    pub tnf_l: Option<f64>,
    pub l1_e: f64,
    /// Wall time since the start of the main loop.
    pub ms: f64,
}

impl IterRecord {
    /// Equality of everything except the wall time.
    pub fn numerics_eq(&self, other: &IterRecord) -> bool {
        let mut a = self.clone();
        a.ms = other.ms;
        &a == other
    }
}

pub const TRACE_HEADER: &str =
    "k,lagrangian,res_feas,res_LH,res_ED,dL,dH,dE,dD,dY,dZ,dU,tnf_L,l1_E,ms";

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IterTrace {
    pub records: Vec<IterRecord>,
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

impl IterTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last(&self) -> Option<&IterRecord> {
        self.records.last()
    }

    pub fn numerics_eq(&self, other: &IterTrace) -> bool {
        self.records.len() == other.records.len()
            && self
                .records
                .iter()
                .zip(&other.records)
                .all(|(a, b)| a.numerics_eq(b))
    }

    pub fn write_csv<W: Write>(&self, w: W) -> std::io::Result<()> {
        self.write_csv_with(w, true)
    }

    /// Like [`IterTrace::write_csv`]; with `timing` off the `ms` column is
    /// left empty so repeated runs give identical files.
    pub fn write_csv_with<W: Write>(&self, mut w: W, timing: bool) -> std::io::Result<()> {
        writeln!(w, "{TRACE_HEADER}")?;
        for r in &self.records {
            writeln!(
                w,
                "{},{},{:e},{},{},{:e},{},{:e},{},{},{:e},{},{},{:e},{}",
                r.k,
                opt(r.lagrangian),
                r.res_feas,
                opt(r.res_lh),
                opt(r.res_ed),
                r.d_l,
                opt(r.d_h),
                r.d_e,
                opt(r.d_d),
                opt(r.d_y),
                r.d_z,
                opt(r.d_u),
                opt(r.tnf_l),
                r.l1_e,
                if timing {
                    format!("{:.3}", r.ms)
                } else {
                    String::new()
                }
            )?;
        }
        Ok(())
    }
}
