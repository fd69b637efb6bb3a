//! File formats: point-cloud CSV with a JSON sidecar, histogram CSV,
//! summary JSON, projection persistence, and experiment reports.
//!
//! Floats are written with 17 significant digits, which round-trips every
//! f64 exactly; parsing any file this module wrote recovers bit-identical
//! values. Sidecars live next to their data file with the extension
//! replaced by `meta.json`.

use crate::error::{Error, Result};
use crate::projection::RandomProjection;
use crate::samplers::{CloudMeta, DistKind, DistributionSpec, PointCloud};
use crate::seed::RandomSeed;
use crate::stats::{Histogram, SummaryStats};
use serde::{Deserialize, Serialize};
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

/// 17 significant digits: lossless for f64 and fixed-width enough for diffs.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// `foo.csv -> foo.meta.json`
pub fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("meta.json")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CloudSidecar {
    schema: u32,
    kind: String,
    d: usize,
    sigma: Option<f64>,
    n: usize,
    seed: Option<u64>,
}

fn sidecar_for(cloud: &PointCloud) -> CloudSidecar {
    let (kind, sigma, seed) = match &cloud.meta {
        CloudMeta::Sampled { spec, seed } => (
            spec.kind.token().to_string(),
            match spec.kind {
                DistKind::GaussianSpherical => Some(spec.sigma),
                _ => None,
            },
            Some(seed.0),
        ),
        CloudMeta::Projected { seed, k: _ } => {
            ("projected".to_string(), None, seed.map(|s| s.0))
        }
        CloudMeta::External => ("external".to_string(), None, None),
    };
    CloudSidecar { schema: 1, kind, d: cloud.dim(), sigma, n: cloud.len(), seed }
}

fn meta_from_sidecar(sc: &CloudSidecar) -> Result<CloudMeta> {
    let seed = sc.seed.map(RandomSeed);
    Ok(match sc.kind.as_str() {
        "gaussian" => CloudMeta::Sampled {
            spec: DistributionSpec::gaussian(sc.d, sc.sigma.unwrap_or(1.0))?,
            seed: seed.unwrap_or(RandomSeed(0)),
        },
        "ball" => CloudMeta::Sampled {
            spec: DistributionSpec::ball(sc.d)?,
            seed: seed.unwrap_or(RandomSeed(0)),
        },
        "cube" => CloudMeta::Sampled {
            spec: DistributionSpec::cube(sc.d)?,
            seed: seed.unwrap_or(RandomSeed(0)),
        },
        "projected" => CloudMeta::Projected { seed, k: sc.d },
        "external" => CloudMeta::External,
        other => {
            return Err(Error::Parse(format!("unknown cloud kind {other:?} in sidecar")));
        }
    })
}

/// Writes `x1,...,xd` CSV plus the `meta.json` sidecar.
pub fn write_points_csv(path: &Path, cloud: &PointCloud) -> Result<()> {
    let mut out = String::new();
    let header: Vec<String> = (1..=cloud.dim()).map(|i| format!("x{i}")).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in cloud.rows() {
        let cells: Vec<String> = row.iter().map(|v| fmt_float(*v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    atomic_write(path, out.as_bytes())?;
    let sidecar = serde_json::to_string_pretty(&sidecar_for(cloud))
        .expect("sidecar is always serializable");
    atomic_write(&sidecar_path(path), sidecar.as_bytes())?;
    Ok(())
}

/// Reads a point-cloud CSV; restores provenance from the sidecar when one
/// sits next to the file, otherwise marks the cloud external.
pub fn read_points_csv(path: &Path) -> Result<PointCloud> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse(format!("{}: empty file", path.display())))?;
    let cols: Vec<&str> = header.split(',').collect();
    let d = cols.len();
    for (i, c) in cols.iter().enumerate() {
        let expected = format!("x{}", i + 1);
        if *c != expected {
            return Err(Error::Parse(format!(
                "{}: header column {} is {c:?}, expected {expected:?}",
                path.display(),
                i + 1
            )));
        }
    }
    let mut data = Vec::new();
    let mut n = 0usize;
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != d {
            return Err(Error::Parse(format!(
                "{}: line {} has {} cells, expected {d}",
                path.display(),
                lineno + 2,
                cells.len()
            )));
        }
        for cell in cells {
            let v: f64 = cell.trim().parse().map_err(|_| {
                Error::Parse(format!(
                    "{}: line {}: bad float {cell:?}",
                    path.display(),
                    lineno + 2
                ))
            })?;
            data.push(v);
        }
        n += 1;
    }
    let meta = match fs::read_to_string(sidecar_path(path)) {
        Ok(text) => {
            let sc: CloudSidecar = serde_json::from_str(&text)
                .map_err(|e| Error::Parse(format!("sidecar: {e}")))?;
            if sc.n != n || sc.d != d {
                return Err(Error::Parse(format!(
                    "sidecar says {}x{}, file holds {n}x{d}",
                    sc.n, sc.d
                )));
            }
            meta_from_sidecar(&sc)?
        }
        Err(_) => CloudMeta::External,
    };
    PointCloud::from_rows(data, n, d, meta)
}

/// `bin_left,bin_right,count` rows. Out-of-range counters are not part of
/// the format; a read-back histogram reports them as zero.
pub fn write_histogram_csv(path: &Path, hist: &Histogram) -> Result<()> {
    let mut out = String::from("bin_left,bin_right,count\n");
    for (i, c) in hist.counts.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{c}\n",
            fmt_float(hist.edges[i]),
            fmt_float(hist.edges[i + 1])
        ));
    }
    atomic_write(path, out.as_bytes())
}

pub fn read_histogram_csv(path: &Path) -> Result<Histogram> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    match lines.next() {
        Some("bin_left,bin_right,count") => {}
        other => {
            return Err(Error::Parse(format!(
                "{}: bad histogram header {other:?}",
                path.display()
            )));
        }
    }
    let mut edges: Vec<f64> = Vec::new();
    let mut counts: Vec<u64> = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 3 {
            return Err(Error::Parse(format!(
                "{}: line {}: expected 3 cells",
                path.display(),
                lineno + 2
            )));
        }
        let bad = |what: &str| Error::Parse(format!("{}: line {}: bad {what}", path.display(), lineno + 2));
        let left: f64 = cells[0].trim().parse().map_err(|_| bad("bin_left"))?;
        let right: f64 = cells[1].trim().parse().map_err(|_| bad("bin_right"))?;
        let count: u64 = cells[2].trim().parse().map_err(|_| bad("count"))?;
        if edges.is_empty() {
            edges.push(left);
        } else if *edges.last().unwrap() != left {
            return Err(Error::Parse(format!(
                "{}: line {}: bins are not contiguous",
                path.display(),
                lineno + 2
            )));
        }
        edges.push(right);
        counts.push(count);
    }
    if counts.is_empty() {
        return Err(Error::Parse(format!("{}: histogram has no bins", path.display())));
    }
    Ok(Histogram { edges, counts, underflow: 0, overflow: 0 })
}

#[derive(Debug, Serialize, Deserialize)]
struct SummaryDoc {
    schema: u32,
    count: usize,
    mean: f64,
    variance: Option<f64>,
    min: f64,
    max: f64,
}

pub fn write_summary_json(path: &Path, s: &SummaryStats) -> Result<()> {
    let doc = SummaryDoc {
        schema: 1,
        count: s.count,
        mean: s.mean,
        variance: s.variance,
        min: s.min,
        max: s.max,
    };
    let text = serde_json::to_string_pretty(&doc).expect("summary is always serializable");
    atomic_write(path, text.as_bytes())
}

pub fn read_summary_json(path: &Path) -> Result<SummaryStats> {
    let text = fs::read_to_string(path)?;
    let doc: SummaryDoc =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("summary: {e}")))?;
    Ok(SummaryStats {
        count: doc.count,
        mean: doc.mean,
        variance: doc.variance,
        min: doc.min,
        max: doc.max,
    })
}

#[derive(Debug, Serialize, Deserialize)]
struct ProjectionSidecar {
    schema: u32,
    d: usize,
    k: usize,
    seed: Option<u64>,
    scaled: bool,
}

/// Persists the `k x d` matrix: CSV rows for `.csv` paths, raw little-endian
/// f64 otherwise, plus a `meta.json` sidecar carrying shape, seed, scaling.
pub fn write_projection(path: &Path, proj: &RandomProjection) -> Result<()> {
    let (d, k) = (proj.dim_in(), proj.dim_out());
    if path.extension().and_then(|e| e.to_str()) == Some("csv") {
        let mut out = String::new();
        for r in 0..k {
            let cells: Vec<String> = proj.row(r).iter().map(|v| fmt_float(*v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        atomic_write(path, out.as_bytes())?;
    } else {
        let mut bytes = Vec::with_capacity(8 * k * d);
        for v in proj.matrix() {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
        atomic_write(path, &bytes)?;
    }
    let sidecar = ProjectionSidecar {
        schema: 1,
        d,
        k,
        seed: proj.seed.map(|s| s.0),
        scaled: proj.scaled,
    };
    let text = serde_json::to_string_pretty(&sidecar).expect("sidecar is always serializable");
    atomic_write(&sidecar_path(path), text.as_bytes())
}

pub fn read_projection(path: &Path) -> Result<RandomProjection> {
    let text = fs::read_to_string(sidecar_path(path)).map_err(|e| {
        Error::Parse(format!(
            "projection sidecar {} unreadable: {e}",
            sidecar_path(path).display()
        ))
    })?;
    let sc: ProjectionSidecar =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("sidecar: {e}")))?;
    let expected = sc.k * sc.d;
    let matrix: Vec<f64> = if path.extension().and_then(|e| e.to_str()) == Some("csv") {
        let text = fs::read_to_string(path)?;
        let mut matrix = Vec::with_capacity(expected);
        for (lineno, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            for cell in line.split(',') {
                let v: f64 = cell.trim().parse().map_err(|_| {
                    Error::Parse(format!(
                        "{}: line {}: bad float {cell:?}",
                        path.display(),
                        lineno + 1
                    ))
                })?;
                matrix.push(v);
            }
        }
        matrix
    } else {
        let bytes = fs::read(path)?;
        if bytes.len() != 8 * expected {
            return Err(Error::Parse(format!(
                "{}: {} bytes, expected {}",
                path.display(),
                bytes.len(),
                8 * expected
            )));
        }
        bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect()
    };
    if matrix.len() != expected {
        return Err(Error::Parse(format!(
            "{}: {} values, sidecar promises {expected}",
            path.display(),
            matrix.len()
        )));
    }
    let mut proj = RandomProjection::from_rows(matrix, sc.k, sc.d, sc.scaled)?;
    proj.seed = sc.seed.map(RandomSeed);
    Ok(proj)
}

/// Write-to-temp-then-rename so partial files never shadow good ones.
fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp.partial");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Generic JSON document writer used for reports and bound results.
pub fn write_json_doc<T: Serialize>(path: &Path, doc: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(doc)
        .map_err(|e| Error::Parse(format!("serialize: {e}")))?;
    atomic_write(path, text.as_bytes())
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    atomic_write(path, text.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::sample;
    use tempfile::tempdir;

    #[test]
    fn float_format_round_trips() {
        let values = [
            0.0,
            -0.0,
            1.0,
            std::f64::consts::PI,
            1e-300,
            -3.4270626223598639e-21,
            f64::MAX,
            f64::MIN_POSITIVE,
        ];
        for v in values {
            let s = fmt_float(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(v.to_bits(), back.to_bits(), "{v} -> {s}");
        }
    }

    #[test]
    fn points_round_trip_with_sidecar() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("cloud.csv");
        let spec = DistributionSpec::gaussian(4, 2.5).unwrap();
        let cloud = sample(&spec, 17, RandomSeed(77)).unwrap();
        write_points_csv(&path, &cloud).unwrap();
        assert!(sidecar_path(&path).exists());
        let back = read_points_csv(&path).unwrap();
        assert_eq!(back.data(), cloud.data());
        assert_eq!(back.meta, cloud.meta);
    }

    #[test]
    fn points_without_sidecar_are_external() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("pts.csv");
        write_text(&path, "x1,x2\n1.0,2.0\n3.0,4.0\n").unwrap();
        let cloud = read_points_csv(&path).unwrap();
        assert_eq!(cloud.len(), 2);
        assert_eq!(cloud.meta, CloudMeta::External);
    }

    #[test]
    fn points_reader_rejects_garbage() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("pts.csv");
        write_text(&path, "a,b\n1.0,2.0\n").unwrap();
        assert!(matches!(read_points_csv(&path), Err(Error::Parse(_))));
        write_text(&path, "x1,x2\n1.0\n").unwrap();
        assert!(matches!(read_points_csv(&path), Err(Error::Parse(_))));
        write_text(&path, "x1,x2\n1.0,zebra\n").unwrap();
        assert!(matches!(read_points_csv(&path), Err(Error::Parse(_))));
    }

    #[test]
    fn histogram_round_trip() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("hist.csv");
        let h = crate::stats::histogram(&[0.1, 0.2, 0.7, 2.0], 0.0, 1.0, 4).unwrap();
        write_histogram_csv(&path, &h).unwrap();
        let back = read_histogram_csv(&path).unwrap();
        assert_eq!(back.edges, h.edges);
        assert_eq!(back.counts, h.counts);
        assert_eq!(back.overflow, 0); // out-of-range info is not persisted
    }

    #[test]
    fn summary_round_trip() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("summary.json");
        let s = crate::stats::summarize(&[1.0, 2.0, 4.0]).unwrap();
        write_summary_json(&path, &s).unwrap();
        let back = read_summary_json(&path).unwrap();
        assert_eq!(back, s);
        let single = crate::stats::summarize(&[5.0]).unwrap();
        write_summary_json(&path, &single).unwrap();
        assert_eq!(read_summary_json(&path).unwrap().variance, None);
    }

    #[test]
    fn projection_round_trip_binary_and_csv() {
        let dir = tempdir().unwrap();
        let proj = crate::projection::make_projection(6, 3, RandomSeed(5)).unwrap();

        let bin = dir.path().join("proj.mat");
        write_projection(&bin, &proj).unwrap();
        let back = read_projection(&bin).unwrap();
        assert_eq!(back, proj);

        let csv = dir.path().join("proj.csv");
        write_projection(&csv, &proj).unwrap();
        let back = read_projection(&csv).unwrap();
        assert_eq!(back, proj);
    }
}
