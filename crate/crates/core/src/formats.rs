//! On-disk formats. All binary formats are little-endian.
//!
//! | magic  | layout after the magic                                            |
//! |--------|-------------------------------------------------------------------|
//! | `GQS1` | `u32` qubits, then `2^n` amplitudes as `(f64 re, f64 im)`         |
//! | `GQU1` | `u32` qubits, `u64` reserved, then `4^n` row-major entries        |
//! | `GQV1` | `u32 × 3` resolution, then `f64` values row-major over `(i, j, k)` |
//! | `GQP1` | `u32` reserved, `u64` count, `f64` box size, then `f32 × 3` points |
//!
//! Grids and ASCII point files carry a JSON sidecar at `<path>.json`.
//! Counts are JSON with bitstrings written most significant qubit first.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cosmicweb::{Normalization, PointCloud, VoxelGrid};
use crate::error::{GeqieError, Result};
use crate::model::UnitaryMatrix;
use crate::simcore::{CountsHistogram, StateVector};

pub const STATE_MAGIC: &[u8; 4] = b"GQS1";
pub const UNITARY_MAGIC: &[u8; 4] = b"GQU1";
pub const GRID_MAGIC: &[u8; 4] = b"GQV1";
pub const POINTS_MAGIC: &[u8; 4] = b"GQP1";

/// Largest unitary also exported as JSON.
pub const UNITARY_JSON_MAX_QUBITS: usize = 4;

struct Reader<'a> {
    bytes: &'a [u8],
    what: &'static str,
}

impl<'a> Reader<'a> {
    fn new(bytes: &'a [u8], magic: &[u8; 4], what: &'static str) -> Result<Self> {
        match bytes.split_first_chunk::<4>() {
            Some((m, rest)) if m == magic => Ok(Self { bytes: rest, what }),
            _ => Err(GeqieError::Parse(format!(
                "{what}: missing {} magic",
                String::from_utf8_lossy(magic)
            ))),
        }
    }

    fn take<const N: usize>(&mut self) -> Result<[u8; N]> {
        let (head, rest) = self
            .bytes
            .split_first_chunk::<N>()
            .ok_or_else(|| GeqieError::Parse(format!("{}: unexpected end of file", self.what)))?;
        self.bytes = rest;
        Ok(*head)
    }

    fn u32(&mut self) -> Result<u32> {
        self.take().map(u32::from_le_bytes)
    }

    fn u64(&mut self) -> Result<u64> {
        self.take().map(u64::from_le_bytes)
    }

    fn f32(&mut self) -> Result<f32> {
        self.take().map(f32::from_le_bytes)
    }

    fn f64(&mut self) -> Result<f64> {
        self.take().map(f64::from_le_bytes)
    }

    fn complex(&mut self) -> Result<Complex64> {
        Ok(Complex64::new(self.f64()?, self.f64()?))
    }

    fn expect_payload(&self, count: usize, width: usize) -> Result<()> {
        match count.checked_mul(width) {
            Some(n) if n == self.bytes.len() => Ok(()),
            _ => Err(GeqieError::Parse(format!(
                "{}: expected {count} records of {width} bytes, found {} bytes",
                self.what,
                self.bytes.len()
            ))),
        }
    }
}

fn qubit_count(raw: u32, what: &str) -> Result<usize> {
    match raw {
        1..=30 => Ok(raw as usize),
        _ => Err(GeqieError::Parse(format!(
            "{what}: implausible qubit count {raw}"
        ))),
    }
}

fn push_complex(out: &mut Vec<u8>, z: Complex64) {
    out.extend_from_slice(&z.re.to_le_bytes());
    out.extend_from_slice(&z.im.to_le_bytes());
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

pub fn state_to_bytes(state: &StateVector) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 + 16 * state.dim());
    out.extend_from_slice(STATE_MAGIC);
    out.extend_from_slice(&(state.n_qubits() as u32).to_le_bytes());
    state
        .amplitudes()
        .iter()
        .for_each(|&z| push_complex(&mut out, z));
    out
}

pub fn state_from_bytes(bytes: &[u8]) -> Result<StateVector> {
    let mut r = Reader::new(bytes, STATE_MAGIC, "state file")?;
    let n = qubit_count(r.u32()?, "state file")?;
    r.expect_payload(1 << n, 16)?;
    let amps = (0..1usize << n)
        .map(|_| r.complex())
        .collect::<Result<_>>()?;
    StateVector::new(n, amps)
}

pub fn unitary_to_bytes(u: &UnitaryMatrix) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 + 16 * u.entries().len());
    out.extend_from_slice(UNITARY_MAGIC);
    out.extend_from_slice(&(u.n_qubits() as u32).to_le_bytes());
    out.extend_from_slice(&0u64.to_le_bytes());
    u.entries().iter().for_each(|&z| push_complex(&mut out, z));
    out
}

pub fn unitary_from_bytes(bytes: &[u8]) -> Result<UnitaryMatrix> {
    let mut r = Reader::new(bytes, UNITARY_MAGIC, "unitary file")?;
    let n = qubit_count(r.u32()?, "unitary file")?;
    r.u64()?;
    let len = 1usize << (2 * n);
    r.expect_payload(len, 16)?;
    let entries = (0..len).map(|_| r.complex()).collect::<Result<_>>()?;
    UnitaryMatrix::new(n, entries)
}

#[derive(Serialize, Deserialize)]
struct UnitaryJson {
    n_qubits: usize,
    /// Rows of `[re, im]` pairs.
    entries: Vec<Vec<[f64; 2]>>,
}

/// JSON form of small unitaries; `None` above [`UNITARY_JSON_MAX_QUBITS`].
pub fn unitary_to_json(u: &UnitaryMatrix) -> Option<String> {
    if u.n_qubits() > UNITARY_JSON_MAX_QUBITS {
        return None;
    }
    let entries = u
        .entries()
        .chunks(u.dim())
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
        .collect();
    serde_json::to_string_pretty(&UnitaryJson {
        n_qubits: u.n_qubits(),
        entries,
    })
    .ok()
}

pub fn unitary_from_json(text: &str) -> Result<UnitaryMatrix> {
    let parsed: UnitaryJson = serde_json::from_str(text)?;
    let entries = parsed
        .entries
        .into_iter()
        .flatten()
        .map(|[re, im]| Complex64::new(re, im))
        .collect();
    UnitaryMatrix::new(parsed.n_qubits, entries)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSidecar {
    pub resolution: [usize; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalization: Option<Normalization>,
}

pub fn grid_to_bytes(grid: &VoxelGrid) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 + 8 * grid.len());
    out.extend_from_slice(GRID_MAGIC);
    for r in grid.resolution() {
        out.extend_from_slice(&(r as u32).to_le_bytes());
    }
    grid.values()
        .iter()
        .for_each(|v| out.extend_from_slice(&v.to_le_bytes()));
    out
}

pub fn grid_from_bytes(bytes: &[u8], normalization: Option<Normalization>) -> Result<VoxelGrid> {
    let mut r = Reader::new(bytes, GRID_MAGIC, "grid file")?;
    let res = [r.u32()? as usize, r.u32()? as usize, r.u32()? as usize];
    let len = res.iter().try_fold(1usize, |a, &b| a.checked_mul(b));
    let len =
        len.ok_or_else(|| GeqieError::Parse(format!("grid file: resolution {res:?} overflows")))?;
    r.expect_payload(len, 8)?;
    let values = (0..len).map(|_| r.f64()).collect::<Result<_>>()?;
    VoxelGrid::with_normalization(res, values, normalization)
}

/// Writes `path` and its sidecar.
pub fn write_grid(path: &Path, grid: &VoxelGrid) -> Result<()> {
    fs::write(path, grid_to_bytes(grid))?;
    let sidecar = GridSidecar {
        resolution: grid.resolution(),
        normalization: grid.normalization(),
    };
    fs::write(sidecar_path(path), serde_json::to_string_pretty(&sidecar)?)?;
    Ok(())
}

/// Reads `path`; the sidecar is optional and supplies normalization metadata.
pub fn read_grid(path: &Path) -> Result<VoxelGrid> {
    let bytes = fs::read(path)?;
    let side = sidecar_path(path);
    let sidecar: Option<GridSidecar> = if side.exists() {
        Some(serde_json::from_str(&fs::read_to_string(side)?)?)
    } else {
        None
    };
    let grid = grid_from_bytes(&bytes, sidecar.as_ref().and_then(|s| s.normalization))?;
    if let Some(s) = sidecar {
        if s.resolution != grid.resolution() {
            return Err(GeqieError::Parse(format!(
                "grid sidecar resolution {:?} disagrees with file {:?}",
                s.resolution,
                grid.resolution()
            )));
        }
    }
    Ok(grid)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointsSidecar {
    pub box_size: f64,
}

pub fn points_to_ascii(cloud: &PointCloud) -> String {
    let mut s = String::with_capacity(cloud.len() * 40);
    for [x, y, z] in cloud.points() {
        s.push_str(&format!("{x} {y} {z}\n"));
    }
    s
}

/// Parses `x y z` lines; blank lines and `#` comments are skipped.
pub fn points_from_ascii(text: &str, box_size: f64) -> Result<PointCloud> {
    let mut points = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || GeqieError::Parse(format!("points line {}: expected `x y z`", lineno + 1));
        let fields: Vec<f64> = line
            .split_whitespace()
            .map(|f| f.parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let [x, y, z] = fields[..] else {
            return Err(bad());
        };
        points.push([x, y, z]);
    }
    PointCloud::new(points, box_size)
}

pub fn points_to_bytes(cloud: &PointCloud) -> Vec<u8> {
    let mut out = Vec::with_capacity(24 + 12 * cloud.len());
    out.extend_from_slice(POINTS_MAGIC);
    out.extend_from_slice(&0u32.to_le_bytes());
    out.extend_from_slice(&(cloud.len() as u64).to_le_bytes());
    out.extend_from_slice(&cloud.box_size().to_le_bytes());
    for p in cloud.points() {
        for c in p {
            out.extend_from_slice(&(*c as f32).to_le_bytes());
        }
    }
    out
}

pub fn points_from_bytes(bytes: &[u8]) -> Result<PointCloud> {
    let mut r = Reader::new(bytes, POINTS_MAGIC, "points file")?;
    r.u32()?;
    let count = usize::try_from(r.u64()?)
        .map_err(|_| GeqieError::Parse("points file: count overflows".into()))?;
    let box_size = r.f64()?;
    r.expect_payload(count, 12)?;
    let points = (0..count)
        .map(|_| Ok([r.f32()? as f64, r.f32()? as f64, r.f32()? as f64]))
        .collect::<Result<_>>()?;
    PointCloud::new(points, box_size)
}

/// Reads a binary `GQP1` file, or ASCII with a `{"box_size": ..}` sidecar.
pub fn read_points(path: &Path) -> Result<PointCloud> {
    let bytes = fs::read(path)?;
    if bytes.starts_with(POINTS_MAGIC) {
        return points_from_bytes(&bytes);
    }
    let side = sidecar_path(path);
    if !side.exists() {
        return Err(GeqieError::Parse(format!(
            "ASCII points need a sidecar {} with box_size",
            side.display()
        )));
    }
    let sidecar: PointsSidecar = serde_json::from_str(&fs::read_to_string(side)?)?;
    let text = String::from_utf8(bytes)
        .map_err(|_| GeqieError::Parse("points file is neither GQP1 nor UTF-8 text".into()))?;
    points_from_ascii(&text, sidecar.box_size)
}

/// Writes binary when `binary`, otherwise ASCII plus sidecar.
pub fn write_points(path: &Path, cloud: &PointCloud, binary: bool) -> Result<()> {
    if binary {
        fs::write(path, points_to_bytes(cloud))?;
    } else {
        fs::write(path, points_to_ascii(cloud))?;
        let sidecar = PointsSidecar {
            box_size: cloud.box_size(),
        };
        fs::write(sidecar_path(path), serde_json::to_string_pretty(&sidecar)?)?;
    }
    Ok(())
}

pub fn bitstring(index: usize, n_qubits: usize) -> String {
    format!("{index:0n_qubits$b}")
}

pub fn parse_bitstring(s: &str, n_qubits: usize) -> Result<usize> {
    if s.len() != n_qubits || !s.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(GeqieError::Parse(format!(
            "`{s}` is not a {n_qubits}-qubit bitstring"
        )));
    }
    usize::from_str_radix(s, 2).map_err(|e| GeqieError::Parse(e.to_string()))
}

/// Measurement results: sampled counts, or exact probabilities when `shots` is 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountsFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
    pub n_qubits: usize,
    pub shots: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<BTreeMap<String, u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probabilities: Option<BTreeMap<String, f64>>,
}

impl CountsFile {
    pub fn from_counts(hist: &CountsHistogram) -> Self {
        let n = hist.n_qubits();
        Self {
            method: None,
            dims: None,
            n_qubits: n,
            shots: hist.shots(),
            counts: Some(
                hist.iter_nonzero()
                    .map(|(i, c)| (bitstring(i, n), c))
                    .collect(),
            ),
            probabilities: None,
        }
    }

    /// Nonzero entries only.
    pub fn from_probabilities(n_qubits: usize, probs: &[f64]) -> Self {
        Self {
            method: None,
            dims: None,
            n_qubits,
            shots: 0,
            counts: None,
            probabilities: Some(
                probs
                    .iter()
                    .enumerate()
                    .filter(|(_, &p)| p > 0.0)
                    .map(|(i, &p)| (bitstring(i, n_qubits), p))
                    .collect(),
            ),
        }
    }

    pub fn with_source(mut self, method: &str, dims: &[usize]) -> Self {
        self.method = Some(method.to_string());
        self.dims = Some(dims.to_vec());
        self
    }

    /// Dense outcome weights indexed by basis state.
    pub fn weights(&self) -> Result<Vec<f64>> {
        let n = self.n_qubits;
        if !(1..=30).contains(&n) {
            return Err(GeqieError::Parse(format!("implausible qubit count {n}")));
        }
        let mut w = vec![0.0; 1 << n];
        match (&self.counts, &self.probabilities) {
            (Some(c), None) => {
                for (k, &v) in c {
                    w[parse_bitstring(k, n)?] += v as f64;
                }
            }
            (None, Some(p)) => {
                for (k, &v) in p {
                    if !(v >= 0.0 && v.is_finite()) {
                        return Err(GeqieError::Parse(format!(
                            "invalid probability {v} for {k}"
                        )));
                    }
                    w[parse_bitstring(k, n)?] += v;
                }
            }
            _ => {
                return Err(GeqieError::Parse(
                    "counts file needs exactly one of `counts` or `probabilities`".into(),
                ))
            }
        }
        Ok(w)
    }

    pub fn to_histogram(&self) -> Result<CountsHistogram> {
        let Some(c) = &self.counts else {
            return Err(GeqieError::Parse(
                "file holds probabilities, not counts".into(),
            ));
        };
        let pairs = c
            .iter()
            .map(|(k, &v)| Ok((parse_bitstring(k, self.n_qubits)?, v)))
            .collect::<Result<Vec<_>>>()?;
        CountsHistogram::from_pairs(self.n_qubits, pairs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bitstrings_are_msb_first() {
        assert_eq!(bitstring(1, 3), "001");
        assert_eq!(bitstring(6, 3), "110");
        assert_eq!(parse_bitstring("110", 3).unwrap(), 6);
        assert!(parse_bitstring("12", 2).is_err());
        assert!(parse_bitstring("10", 3).is_err());
    }

    #[test]
    fn state_bytes_roundtrip() {
        let s = StateVector::normalized(2, vec![Complex64::new(1.0, 0.5); 4]).unwrap();
        let bytes = state_to_bytes(&s);
        assert_eq!(&bytes[..4], b"GQS1");
        assert_eq!(bytes.len(), 8 + 4 * 16);
        assert_eq!(state_from_bytes(&bytes).unwrap(), s);
        assert!(state_from_bytes(&bytes[..20]).is_err());
        assert!(state_from_bytes(b"GQX1\x01\x00\x00\x00").is_err());
    }

    #[test]
    fn grid_bytes_roundtrip() {
        let g = VoxelGrid::new([2, 2, 2], (0..8).map(f64::from).collect()).unwrap();
        assert_eq!(grid_from_bytes(&grid_to_bytes(&g), None).unwrap(), g);
    }

    #[test]
    fn points_ascii_rejects_bad_lines() {
        assert!(points_from_ascii("1 2\n", 10.0).is_err());
        let c = points_from_ascii("# header\n1 2 3\n\n4 5 6\n", 10.0).unwrap();
        assert_eq!(c.points(), &[[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]);
    }

    #[test]
    fn counts_file_weights() {
        let h = CountsHistogram::from_pairs(2, [(0, 3), (2, 5)]).unwrap();
        let f = CountsFile::from_counts(&h);
        let json = serde_json::to_string(&f).unwrap();
        assert!(json.contains("\"10\":5"));
        let back: CountsFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back.weights().unwrap(), vec![3.0, 0.0, 5.0, 0.0]);
        assert_eq!(back.to_histogram().unwrap(), h);
    }
}
