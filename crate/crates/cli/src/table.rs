//! Sweep tables as CSV.

use ruinlab_core::{SweepAxis, SweepRow};

pub const HEADER: [&str; 7] = [
    "axis",
    "value",
    "umr",
    "x_star",
    "objective",
    "converged_in_k",
    "error",
];

/// Renders `v` with 12 significant digits, trailing zeros removed.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let fixed = format!("{:.*}", (11 - exp).max(0) as usize, v);
        trim_zeros(&fixed).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_num).unwrap_or_default()
}

pub fn to_csv(axis: SweepAxis, rows: &[SweepRow]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(HEADER).expect("in-memory write");
    for r in rows {
        w.write_record([
            axis.as_str().to_string(),
            fmt_num(r.axis_value),
            opt(r.umr),
            opt(r.x_star),
            opt(r.objective),
            r.converged_in_k.map(|b| b.to_string()).unwrap_or_default(),
            r.error.clone().unwrap_or_default(),
        ])
        .expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}
