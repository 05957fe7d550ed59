//! File formats: IDX images and labels, numeric CSV matrices, configuration
//! CSVs and the JSON run manifest.
//!
//! Reals are written as `{:.16e}` (17 significant digits), which parses
//! back to the identical `f64`.

use std::fs;
use std::path::{Path, PathBuf};

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::algorithms::{Algorithm, AlgorithmParams};
use crate::classical::MdsConfiguration;
use crate::error::{MdsError, Result};
use crate::matrix::DataMatrix;

pub const IDX_IMAGE_MAGIC: u32 = 0x0000_0803;
pub const IDX_LABEL_MAGIC: u32 = 0x0000_0801;

/// Unsigned-byte images from an IDX file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdxImageSet {
    pub count: usize,
    pub height: usize,
    pub width: usize,
    /// `count · height · width` bytes, image after image, row-major.
    pub pixels: Vec<u8>,
}

impl IdxImageSet {
    pub fn image(&self, i: usize) -> &[u8] {
        let size = self.height * self.width;
        &self.pixels[i * size..(i + 1) * size]
    }

    /// One row per image, `height · width` columns.
    pub fn to_data_matrix(&self) -> Result<DataMatrix> {
        if self.count == 0 {
            return Err(MdsError::Param("image set is empty".into()));
        }
        let values = self.pixels.iter().map(|&p| f64::from(p)).collect();
        DataMatrix::new(self.count, self.height * self.width, values)
    }
}

fn read_be_u32(bytes: &[u8], at: usize) -> u32 {
    u32::from_be_bytes(bytes[at..at + 4].try_into().expect("4 bytes"))
}

fn parse_idx_header(path: &Path, bytes: &[u8], magic: u32, dims: usize) -> Result<Vec<usize>> {
    let header_len = 4 + 4 * dims;
    if bytes.len() < header_len {
        return Err(MdsError::format(
            path,
            format!("header needs {header_len} bytes, file has {}", bytes.len()),
        ));
    }
    let found = read_be_u32(bytes, 0);
    if found != magic {
        return Err(MdsError::format(
            path,
            format!("magic number {found:#010x}, expected {magic:#010x}"),
        ));
    }
    Ok((0..dims).map(|d| read_be_u32(bytes, 4 + 4 * d) as usize).collect())
}

fn check_payload(path: &Path, bytes: &[u8], header_len: usize, expected: usize) -> Result<()> {
    let actual = bytes.len() - header_len;
    if actual != expected {
        return Err(MdsError::format(
            path,
            format!("payload is {actual} bytes, header implies {expected}"),
        ));
    }
    Ok(())
}

pub fn parse_idx_images(path: &Path, bytes: &[u8]) -> Result<IdxImageSet> {
    let dims = parse_idx_header(path, bytes, IDX_IMAGE_MAGIC, 3)?;
    let (count, height, width) = (dims[0], dims[1], dims[2]);
    let expected = count
        .checked_mul(height)
        .and_then(|v| v.checked_mul(width))
        .ok_or_else(|| MdsError::format(path, "image dimensions overflow"))?;
    check_payload(path, bytes, 16, expected)?;
    Ok(IdxImageSet {
        count,
        height,
        width,
        pixels: bytes[16..].to_vec(),
    })
}

pub fn read_idx_images(path: &Path) -> Result<IdxImageSet> {
    let bytes = fs::read(path).map_err(|e| MdsError::io(path, e))?;
    parse_idx_images(path, &bytes)
}

pub fn parse_idx_labels(path: &Path, bytes: &[u8]) -> Result<Vec<u8>> {
    let count = parse_idx_header(path, bytes, IDX_LABEL_MAGIC, 1)?[0];
    check_payload(path, bytes, 8, count)?;
    Ok(bytes[8..].to_vec())
}

pub fn read_idx_labels(path: &Path) -> Result<Vec<u8>> {
    let bytes = fs::read(path).map_err(|e| MdsError::io(path, e))?;
    parse_idx_labels(path, &bytes)
}

pub fn encode_idx_images(set: &IdxImageSet) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 + set.pixels.len());
    out.extend_from_slice(&IDX_IMAGE_MAGIC.to_be_bytes());
    for d in [set.count, set.height, set.width] {
        out.extend_from_slice(&(d as u32).to_be_bytes());
    }
    out.extend_from_slice(&set.pixels);
    out
}

pub fn encode_idx_labels(labels: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 + labels.len());
    out.extend_from_slice(&IDX_LABEL_MAGIC.to_be_bytes());
    out.extend_from_slice(&(labels.len() as u32).to_be_bytes());
    out.extend_from_slice(labels);
    out
}

pub fn write_idx_images(set: &IdxImageSet, path: &Path) -> Result<()> {
    fs::write(path, encode_idx_images(set)).map_err(|e| MdsError::io(path, e))
}

pub fn write_idx_labels(labels: &[u8], path: &Path) -> Result<()> {
    fs::write(path, encode_idx_labels(labels)).map_err(|e| MdsError::io(path, e))
}

/// Pair images with labels; the counts must agree.
pub fn join_labels(images: &IdxImageSet, labels: Vec<u8>) -> Result<Vec<(usize, u8)>> {
    if labels.len() != images.count {
        return Err(MdsError::Join(format!(
            "{} images but {} labels",
            images.count,
            labels.len()
        )));
    }
    Ok(labels.into_iter().enumerate().collect())
}

fn csv_failure(path: &Path, e: csv::Error) -> MdsError {
    let line = e.position().map(|p| p.line());
    match line {
        Some(line) => MdsError::format(path, format!("line {line}: {e}")),
        None => MdsError::format(path, e.to_string()),
    }
}

/// Read a rectangular numeric CSV.
pub fn read_csv_matrix(path: &Path, has_header: bool) -> Result<DataMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_failure(path, e))?;
    let mut cols = None;
    let mut rows = 0;
    let mut values = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_failure(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        match cols {
            None => cols = Some(record.len()),
            Some(c) if c != record.len() => {
                return Err(MdsError::format(
                    path,
                    format!("line {line}: {} fields, expected {c}", record.len()),
                ));
            }
            Some(_) => {}
        }
        for field in record.iter() {
            let v: f64 = field.parse().map_err(|_| {
                MdsError::format(path, format!("line {line}: {field:?} is not a number"))
            })?;
            values.push(v);
        }
        rows += 1;
    }
    let cols = cols.ok_or_else(|| MdsError::format(path, "no data rows"))?;
    DataMatrix::new(rows, cols, values).map_err(|e| MdsError::format(path, e.to_string()))
}

fn write_real_rows(path: &Path, rows: usize, cols: usize, get: impl Fn(usize, usize) -> f64) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(|e| csv_failure(path, e))?;
    let mut record = Vec::with_capacity(cols);
    for i in 0..rows {
        record.clear();
        record.extend((0..cols).map(|j| format!("{:.16e}", get(i, j))));
        writer.write_record(&record).map_err(|e| csv_failure(path, e))?;
    }
    writer.flush().map_err(|e| MdsError::io(path, e))
}

/// Headerless CSV, 17 significant digits.
pub fn write_csv_matrix(data: &DataMatrix, path: &Path) -> Result<()> {
    write_real_rows(path, data.nrows(), data.ncols(), |i, j| data.get(i, j))
}

/// Configuration points as headerless CSV, 17 significant digits.
pub fn write_configuration(config: &MdsConfiguration, path: &Path) -> Result<()> {
    let p = &config.points;
    write_real_rows(path, p.nrows(), p.ncols(), |i, j| p[(i, j)])
}

pub fn read_configuration(path: &Path) -> Result<Mat<f64>> {
    Ok(read_csv_matrix(path, false)?.to_mat())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    Csv,
    Idx,
}

/// Load a data matrix. CSV files may carry one header line.
pub fn load_input(path: &Path, format: InputFormat, has_header: bool) -> Result<DataMatrix> {
    match format {
        InputFormat::Csv => read_csv_matrix(path, has_header),
        InputFormat::Idx => read_idx_images(path)?.to_data_matrix(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputSummary {
    pub path: PathBuf,
    pub format: InputFormat,
    pub rows: usize,
    pub cols: usize,
}

/// What a `mds` run did and produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub algorithm: Algorithm,
    pub params: AlgorithmParams,
    pub input: InputSummary,
    pub outputs: Vec<PathBuf>,
    pub gof_g1: f64,
    pub gof_g2: f64,
    pub eigenvalue_estimates: Vec<f64>,
    pub degenerate_alignments: usize,
    pub elapsed_s: f64,
    pub threads: usize,
}

/// Write `manifest` as pretty JSON. Every referenced path must exist.
pub fn write_manifest(manifest: &RunManifest, path: &Path) -> Result<()> {
    for p in std::iter::once(&manifest.input.path).chain(&manifest.outputs) {
        if !p.exists() {
            return Err(MdsError::InvalidInput(format!(
                "manifest references missing file {}",
                p.display()
            )));
        }
    }
    let json = serde_json::to_string_pretty(manifest).map_err(|e| MdsError::format(path, e.to_string()))?;
    fs::write(path, json + "\n").map_err(|e| MdsError::io(path, e))
}

pub fn read_manifest(path: &Path) -> Result<RunManifest> {
    let text = fs::read_to_string(path).map_err(|e| MdsError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| MdsError::format(path, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_images() -> Vec<u8> {
        let mut b = vec![0, 0, 8, 3, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0, 0, 2];
        b.extend_from_slice(&[0, 1, 2, 255, 10, 20, 30, 40]);
        b
    }

    #[test]
    fn hand_assembled_images() {
        let set = parse_idx_images(Path::new("x"), &two_images()).unwrap();
        let m = set.to_data_matrix().unwrap();
        assert_eq!((m.nrows(), m.ncols()), (2, 4));
        assert_eq!(m.row(0), &[0.0, 1.0, 2.0, 255.0]);
        assert_eq!(m.row(1), &[10.0, 20.0, 30.0, 40.0]);
        assert_eq!(encode_idx_images(&set), two_images());
    }

    #[test]
    fn label_magic_rejected_for_images() {
        let mut b = two_images();
        b[3] = 1;
        assert!(matches!(parse_idx_images(Path::new("x"), &b), Err(MdsError::Format { .. })));
    }

    #[test]
    fn truncated_payload_reports_counts() {
        let b = &two_images()[..20];
        let err = parse_idx_images(Path::new("x"), b).unwrap_err().to_string();
        assert!(err.contains("4 bytes") && err.contains("8"), "{err}");
    }

    #[test]
    fn zero_images_accepted_then_rejected_downstream() {
        let b = [0, 0, 8, 3, 0, 0, 0, 0, 0, 0, 0, 28, 0, 0, 0, 28];
        let set = parse_idx_images(Path::new("x"), &b).unwrap();
        assert_eq!(set.count, 0);
        assert!(matches!(set.to_data_matrix(), Err(MdsError::Param(_))));
    }

    #[test]
    fn labels() {
        let b = [0, 0, 8, 1, 0, 0, 0, 3, 0, 1, 61];
        let labels = parse_idx_labels(Path::new("x"), &b).unwrap();
        assert_eq!(labels, vec![0, 1, 61]);
        assert_eq!(encode_idx_labels(&labels), b);
        assert!(matches!(parse_idx_labels(Path::new("x"), &[]), Err(MdsError::Format { .. })));
        let images = parse_idx_images(Path::new("x"), &two_images()).unwrap();
        assert!(matches!(join_labels(&images, labels), Err(MdsError::Join(_))));
        assert_eq!(join_labels(&images, vec![4, 5]).unwrap(), vec![(0, 4), (1, 5)]);
    }

    #[test]
    fn csv_basic_and_ragged() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.csv");
        fs::write(&p, "1,2\n3,4").unwrap();
        let m = read_csv_matrix(&p, false).unwrap();
        assert_eq!(m.values(), &[1.0, 2.0, 3.0, 4.0]);
        fs::write(&p, "1,2\n3").unwrap();
        let err = read_csv_matrix(&p, false).unwrap_err();
        assert!(matches!(err, MdsError::Format { .. }));
        assert!(err.to_string().contains("line 2"), "{err}");
        fs::write(&p, "x,y\n1,2\n").unwrap();
        assert_eq!(read_csv_matrix(&p, true).unwrap().nrows(), 1);
        fs::write(&p, "1,oops\n").unwrap();
        assert!(read_csv_matrix(&p, false).is_err());
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.csv");
        let mut rng = crate::rng::stream_rng(3, 0);
        let mut normal = crate::rng::NormalSampler::new();
        let m = DataMatrix::from_fn(1000, 10, |_, _| normal.sample(&mut rng) * 1e3).unwrap();
        write_csv_matrix(&m, &p).unwrap();
        assert_eq!(read_csv_matrix(&p, false).unwrap(), m);
    }

    #[test]
    fn manifest_requires_existing_paths() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("in.csv");
        fs::write(&input, "1\n").unwrap();
        let mut manifest = RunManifest {
            algorithm: Algorithm::Classical,
            params: Algorithm::Classical.default_params(1, 0),
            input: InputSummary { path: input, format: InputFormat::Csv, rows: 1, cols: 1 },
            outputs: vec![dir.path().join("missing.csv")],
            gof_g1: 1.0,
            gof_g2: 1.0,
            eigenvalue_estimates: vec![0.5],
            degenerate_alignments: 0,
            elapsed_s: 0.0,
            threads: 1,
        };
        let out = dir.path().join("m.json");
        assert!(matches!(write_manifest(&manifest, &out), Err(MdsError::InvalidInput(_))));
        manifest.outputs.clear();
        write_manifest(&manifest, &out).unwrap();
        assert_eq!(read_manifest(&out).unwrap(), manifest);
    }
}
