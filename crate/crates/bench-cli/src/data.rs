//! Seeded stream generators and the on-disk formats the CLI exchanges:
//! markets as CSV with header `a1,...,ad`, observable streams as JSON
//! arrays of row-major `[re, im]` matrices.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use barrier_omd::ops::PriceRelatives;
use barrier_omd::quantum::{
    random_density_gram, random_pure_state, random_unitary, sample_measurement, CMatrix,
    DensityMatrix, Observable, Povm,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Named seeded market generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum MarketKind {
    /// Every price relative independently uniform on [0, 1).
    IidUniform,
    /// Two leading assets alternate winning (1.0 vs 0.5) while the rest
    /// stay at 0.25; over an even horizon the best rebalancing splits
    /// evenly between the leaders.
    KellyTwoAsset,
    /// Round `t` pays 1.0 on coordinate `t mod d` and 0.1 elsewhere,
    /// punishing any portfolio that chases the previous winner.
    AdversarialAlternating,
    /// A constant market where asset 1 always wins; the best fixed
    /// portfolio is the vertex with zero loss.
    DominantAsset,
}

/// True state behind a synthesized measurement stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum TrueStateKind {
    MaximallyMixed,
    /// Full-rank Wishart-style state (almost surely interior).
    RandomMixed,
    RandomPure,
}

/// Measurement performed each round of a synthesized stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum PovmStyle {
    /// Fresh Haar-random projective measurement every round.
    RandomProjective,
    /// Measure in the computational basis every round; the resulting
    /// observables all commute, so the run reduces to a simplex problem.
    Diagonal,
    /// The trivial one-element POVM `{I}`: every observable is the
    /// identity and every log loss is exactly zero.
    Identity,
}

fn check_shape(d: usize, t: usize) -> Result<()> {
    if d < 2 {
        bail!("dimension must be >= 2, got {d}");
    }
    if t == 0 {
        bail!("horizon must be >= 1");
    }
    Ok(())
}

/// Deterministically generates `t` rounds of price relatives.
pub fn generate_market(kind: MarketKind, d: usize, t: usize, seed: u64) -> Result<Vec<PriceRelatives>> {
    check_shape(d, t)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut days = Vec::with_capacity(t);
    for round in 0..t {
        let raw: Vec<f64> = match kind {
            MarketKind::IidUniform => loop {
                let v: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
                if v.iter().any(|&x| x > 0.0) {
                    break v;
                }
            },
            MarketKind::KellyTwoAsset => {
                let mut v = vec![0.25; d];
                let (win, lose) = if round % 2 == 0 { (0, 1) } else { (1, 0) };
                v[win] = 1.0;
                v[lose] = 0.5;
                v
            }
            MarketKind::AdversarialAlternating => {
                let mut v = vec![0.1; d];
                v[round % d] = 1.0;
                v
            }
            MarketKind::DominantAsset => {
                let mut v = vec![0.5; d];
                v[0] = 1.0;
                v
            }
        };
        days.push(PriceRelatives::new(raw).with_context(|| format!("market round {}", round + 1))?);
    }
    Ok(days)
}

/// Deterministically generates `t` observables by repeatedly measuring a
/// seeded true state. Both the state and every measurement draw come from
/// the same seeded generator, so equal seeds give identical streams.
pub fn generate_quantum_stream(
    d: usize,
    t: usize,
    seed: u64,
    true_state: TrueStateKind,
    povm: PovmStyle,
) -> Result<Vec<Observable>> {
    check_shape(d, t)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rho_true = match true_state {
        TrueStateKind::MaximallyMixed => DensityMatrix::maximally_mixed(d)?,
        TrueStateKind::RandomMixed => random_density_gram(d, &mut rng)?,
        TrueStateKind::RandomPure => random_pure_state(d, &mut rng)?,
    };
    let fixed_povm = match povm {
        PovmStyle::Diagonal => Some(Povm::projective(&CMatrix::identity(d, d))?),
        PovmStyle::Identity => Some(Povm::new(vec![CMatrix::identity(d, d)])?),
        PovmStyle::RandomProjective => None,
    };
    let mut stream = Vec::with_capacity(t);
    for round in 0..t {
        let povm_t = match &fixed_povm {
            Some(p) => p.clone(),
            None => Povm::projective(&random_unitary(d, &mut rng)?)?,
        };
        let (_, a) = sample_measurement(&rho_true, &povm_t, &mut rng)
            .with_context(|| format!("measurement round {}", round + 1))?;
        stream.push(a);
    }
    Ok(stream)
}

/// Writes a market as CSV with header `a1,...,ad`. Values are printed with
/// the shortest representation that round-trips, so reading the file back
/// reproduces the stream bit for bit.
pub fn write_market_csv(path: &Path, days: &[PriceRelatives]) -> Result<()> {
    if days.is_empty() {
        bail!("refusing to write an empty market");
    }
    let d = days[0].dim();
    let mut wtr =
        csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    wtr.write_record((1..=d).map(|i| format!("a{i}")))?;
    for day in days {
        if day.dim() != d {
            bail!("market rounds have mixed dimensions ({} vs {d})", day.dim());
        }
        wtr.write_record(day.values().iter().map(|v| v.to_string()))?;
    }
    wtr.flush().with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Reads a market CSV written by [`write_market_csv`]: header must be
/// exactly `a1,...,ad`, every row `d` finite nonnegative numbers.
pub fn read_market_csv(path: &Path) -> Result<Vec<PriceRelatives>> {
    let mut rdr =
        csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let headers = rdr.headers().context("reading CSV header")?.clone();
    let d = headers.len();
    for (i, name) in headers.iter().enumerate() {
        let want = format!("a{}", i + 1);
        if name != want {
            bail!("column {} is named {name:?}, expected {want:?}", i + 1);
        }
    }
    let mut days = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec.with_context(|| format!("reading row {}", row + 2))?;
        if rec.len() != d {
            bail!("row {} has {} fields, expected {d}", row + 2, rec.len());
        }
        let mut vals = Vec::with_capacity(d);
        for field in rec.iter() {
            let v: f64 = field
                .trim()
                .parse()
                .with_context(|| format!("row {}: bad number {field:?}", row + 2))?;
            vals.push(v);
        }
        days.push(PriceRelatives::new(vals).with_context(|| format!("row {}", row + 2))?);
    }
    if days.is_empty() {
        bail!("market file {} has no data rows", path.display());
    }
    Ok(days)
}

type JsonMatrix = Vec<Vec<[f64; 2]>>;

/// Writes an observable stream as a JSON array of `d x d` row-major
/// matrices with `[re, im]` entries.
pub fn write_observables_json(path: &Path, stream: &[Observable]) -> Result<()> {
    if stream.is_empty() {
        bail!("refusing to write an empty observable stream");
    }
    let rows: Vec<JsonMatrix> = stream
        .iter()
        .map(|a| {
            let m = a.matrix();
            (0..a.dim())
                .map(|i| (0..a.dim()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                .collect()
        })
        .collect();
    let file =
        fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    serde_json::to_writer(std::io::BufWriter::new(file), &rows)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Reads a stream written by [`write_observables_json`]. Each matrix must
/// be square, Hermitian, and positive semidefinite; entries are rescaled
/// so the top eigenvalue is 1, matching the in-memory normalization.
pub fn read_observables_json(path: &Path) -> Result<Vec<Observable>> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let rows: Vec<JsonMatrix> =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if rows.is_empty() {
        bail!("observable file {} is empty", path.display());
    }
    let d = rows[0].len();
    let mut stream = Vec::with_capacity(rows.len());
    for (round, m) in rows.iter().enumerate() {
        if m.len() != d || m.iter().any(|r| r.len() != d) {
            bail!("round {}: matrix is not {d}x{d}", round + 1);
        }
        let mat = CMatrix::from_fn(d, d, |i, j| Complex64::new(m[i][j][0], m[i][j][1]));
        stream.push(
            Observable::new(mat).with_context(|| format!("round {}: bad observable", round + 1))?,
        );
    }
    Ok(stream)
}
