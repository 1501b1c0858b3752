//! Labeled datasets and the Gaussian blobs generator.

use crate::error::{Error, Result};
use crate::rng::{derive_seed, rng_from_seed, standard_normal, TAG_DATA};
use std::path::Path;

/// A dense classification dataset: `n` rows of `d` features plus an
/// integer class label per row.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    n: usize,
    d: usize,
    classes: usize,
    /// Row-major, `n * d` entries.
    features: Vec<f64>,
    labels: Vec<usize>,
}

impl Dataset {
    pub fn new(features: Vec<f64>, labels: Vec<usize>, d: usize, classes: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Data("dataset needs at least one feature".into()));
        }
        if labels.is_empty() {
            return Err(Error::Data("dataset needs at least one example".into()));
        }
        if features.len() != labels.len() * d {
            return Err(Error::Data(format!(
                "feature buffer has {} entries, want {} examples x {} features",
                features.len(),
                labels.len(),
                d
            )));
        }
        crate::error::ensure_finite("features", &features)?;
        if classes < 2 {
            return Err(Error::Data("dataset needs at least two classes".into()));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= classes) {
            return Err(Error::Data(format!(
                "label {bad} out of range for {classes} classes"
            )));
        }
        Ok(Self {
            n: labels.len(),
            d,
            classes,
            features,
            labels,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn feature_row(&self, i: usize) -> &[f64] {
        &self.features[i * self.d..(i + 1) * self.d]
    }

    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    /// CSV with header `x0,...,x{d-1},label`; features carry 17
    /// significant digits so values round-trip bit-exactly.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for j in 0..self.d {
            out.push_str(&format!("x{j},"));
        }
        out.push_str("label\n");
        for i in 0..self.n {
            for &x in self.feature_row(i) {
                out.push_str(&format!("{x:.16e},"));
            }
            out.push_str(&format!("{}\n", self.labels[i]));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Data("empty dataset file".into()))?;
        let cols: Vec<&str> = header.split(',').collect();
        if cols.len() < 2 || cols[cols.len() - 1] != "label" {
            return Err(Error::Data(
                "dataset header must be x0,...,x{d-1},label".into(),
            ));
        }
        let d = cols.len() - 1;
        let mut features = Vec::new();
        let mut labels = Vec::new();
        for (row, line) in lines.enumerate() {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != d + 1 {
                return Err(Error::Data(format!(
                    "row {row}: expected {} fields, got {}",
                    d + 1,
                    fields.len()
                )));
            }
            for f in &fields[..d] {
                features.push(f.trim().parse::<f64>().map_err(|e| {
                    Error::Data(format!("row {row}: bad feature {f:?}: {e}"))
                })?);
            }
            labels.push(fields[d].trim().parse::<usize>().map_err(|e| {
                Error::Data(format!("row {row}: bad label {:?}: {e}", fields[d]))
            })?);
        }
        let classes = labels.iter().copied().max().unwrap_or(0) + 1;
        Dataset::new(features, labels, d, classes.max(2))
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        Self::from_csv(&std::fs::read_to_string(path)?)
    }
}

/// Generates an axis-separated Gaussian mixture.
///
/// Class `k` is centered at `separation * e_k` (the k-th standard basis
/// vector, so `classes <= d` is required) with unit isotropic covariance.
/// Labels are assigned round robin (`label_i = i mod classes`), giving
/// exactly `n / classes` examples per class; `n` must be divisible by
/// `classes`. Features are drawn example by example, coordinate by
/// coordinate, from a single stream derived from `seed`, so the dataset is
/// a pure function of its arguments.
pub fn make_blobs(
    seed: u64,
    n: usize,
    d: usize,
    classes: usize,
    separation: f64,
) -> Result<Dataset> {
    if classes < 2 {
        return Err(Error::Config("blobs need at least two classes".into()));
    }
    if classes > d {
        return Err(Error::Config(format!(
            "blobs centers are axis-aligned, so classes ({classes}) must not exceed dimensions ({d})"
        )));
    }
    if n == 0 || n % classes != 0 {
        return Err(Error::Config(format!(
            "blobs example count ({n}) must be a positive multiple of classes ({classes})"
        )));
    }
    if !(separation.is_finite() && separation > 0.0) {
        return Err(Error::InvalidHyper {
            name: "separation",
            value: separation,
            constraint: "separation > 0",
        });
    }
    let mut rng = rng_from_seed(derive_seed(seed, TAG_DATA));
    let mut features = Vec::with_capacity(n * d);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let label = i % classes;
        for j in 0..d {
            let center = if j == label { separation } else { 0.0 };
            features.push(center + standard_normal(&mut rng));
        }
        labels.push(label);
    }
    Dataset::new(features, labels, d, classes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blobs_have_balanced_labels_and_separated_means() {
        let ds = make_blobs(42, 400, 8, 4, 6.0).unwrap();
        assert_eq!(ds.n(), 400);
        assert_eq!(ds.d(), 8);
        assert_eq!(ds.classes(), 4);
        let mut counts = [0usize; 4];
        for i in 0..ds.n() {
            counts[ds.label(i)] += 1;
        }
        assert_eq!(counts, [100, 100, 100, 100]);
        // Per-class mean along its own axis should be near the separation.
        for k in 0..4 {
            let mut sum = 0.0;
            for i in 0..ds.n() {
                if ds.label(i) == k {
                    sum += ds.feature_row(i)[k];
                }
            }
            let mean = sum / 100.0;
            assert!((mean - 6.0).abs() < 0.5, "class {k} mean {mean}");
        }
    }

    #[test]
    fn blobs_are_deterministic_in_the_seed() {
        let a = make_blobs(7, 40, 4, 2, 6.0).unwrap();
        let b = make_blobs(7, 40, 4, 2, 6.0).unwrap();
        let c = make_blobs(8, 40, 4, 2, 6.0).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn blobs_reject_bad_shapes() {
        assert!(make_blobs(1, 40, 2, 4, 6.0).is_err()); // classes > d
        assert!(make_blobs(1, 41, 4, 4, 6.0).is_err()); // n not divisible
        assert!(make_blobs(1, 0, 4, 4, 6.0).is_err());
        assert!(make_blobs(1, 40, 4, 1, 6.0).is_err());
        assert!(make_blobs(1, 40, 4, 4, 0.0).is_err());
        assert!(make_blobs(1, 40, 4, 4, f64::NAN).is_err());
    }

    #[test]
    fn csv_round_trips_bit_exactly() {
        let ds = make_blobs(3, 20, 3, 2, 4.0).unwrap();
        let text = ds.to_csv();
        let back = Dataset::from_csv(&text).unwrap();
        assert_eq!(ds, back);
        // Header shape.
        assert!(text.starts_with("x0,x1,x2,label\n"));
        assert_eq!(text.lines().count(), 21);
    }

    #[test]
    fn csv_rejects_malformed_input() {
        assert!(Dataset::from_csv("").is_err());
        assert!(Dataset::from_csv("x0,x1\n1.0,2.0\n").is_err()); // no label col
        assert!(Dataset::from_csv("x0,label\n1.0\n").is_err()); // short row
        assert!(Dataset::from_csv("x0,label\nfoo,0\n").is_err());
        assert!(Dataset::from_csv("x0,label\n1.0,-1\n").is_err());
    }

    #[test]
    fn dataset_new_validates() {
        assert!(Dataset::new(vec![1.0, 2.0], vec![0, 1], 1, 2).is_ok());
        assert!(Dataset::new(vec![1.0], vec![0, 1], 1, 2).is_err());
        assert!(Dataset::new(vec![1.0, f64::NAN], vec![0, 1], 1, 2).is_err());
        assert!(Dataset::new(vec![1.0, 2.0], vec![0, 2], 1, 2).is_err());
    }
}
