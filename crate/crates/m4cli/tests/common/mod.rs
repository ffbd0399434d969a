#![allow(dead_code)]

use std::fmt::Write as _;
use std::path::Path;

/// Small linear congruential noise source so fixtures need no RNG crate.
pub struct Lcg(u64);

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Self(seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407))
    }

    /// Uniform on [-1, 1).
    pub fn next(&mut self) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((self.0 >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    }
}

/// Positive seasonal series with trend and noise.
pub fn synthetic(seed: u64, len: usize, sp: usize) -> Vec<f64> {
    let mut rng = Lcg::new(seed);
    let level = 200.0 + 50.0 * (seed % 7) as f64;
    let slope = 0.5 * ((seed % 5) as f64 - 2.0);
    let amp = if sp > 1 { 20.0 + (seed % 3) as f64 * 10.0 } else { 0.0 };
    (0..len)
        .map(|t| {
            let season = amp * (2.0 * std::f64::consts::PI * t as f64 / sp as f64).sin();
            level + slope * t as f64 + season + 5.0 * rng.next()
        })
        .collect()
}

/// Writes `<stem>-train.csv` / `<stem>-test.csv` in the M4 layout: quoted
/// fields, a `V1..Vn` header and rows padded with empty fields.
pub fn write_m4(dir: &Path, stem: &str, prefix: &str, n: usize, sp: usize, horizon: usize) {
    let mut train_rows = Vec::new();
    let mut test_rows = Vec::new();
    for i in 0..n {
        let len = 3 * sp.max(4) + 10 + (i * 7) % 23;
        let y = synthetic(i as u64 + 1, len + horizon, sp);
        train_rows.push((format!("{prefix}{}", i + 1), y[..len].to_vec()));
        test_rows.push((format!("{prefix}{}", i + 1), y[len..].to_vec()));
    }
    std::fs::write(dir.join(format!("{stem}-train.csv")), render(&train_rows)).unwrap();
    std::fs::write(dir.join(format!("{stem}-test.csv")), render(&test_rows)).unwrap();
}

fn render(rows: &[(String, Vec<f64>)]) -> String {
    let width = rows.iter().map(|r| r.1.len()).max().unwrap_or(0) + 1;
    let mut s = String::new();
    let header: Vec<String> = (1..=width).map(|i| format!("\"V{i}\"")).collect();
    let _ = writeln!(s, "{}", header.join(","));
    for (id, values) in rows {
        let mut fields = vec![format!("\"{id}\"")];
        fields.extend(values.iter().map(|v| format!("\"{v}\"")));
        fields.resize(width, "\"\"".to_string());
        let _ = writeln!(s, "{}", fields.join(","));
    }
    s
}
