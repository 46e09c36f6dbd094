//! Text formats.
//!
//! - half-space domain: one `nx ny nz d` per line, meaning `n·x <= d`
//! - tensor field: `x y z g11 g12 g13 g22 g23 g33` per line
//! - surface: OBJ (`v`/`f`, triangles only) or OFF
//! - seeds: `x y z` per line
//! - trace: CSV `iter,F,grad_inf_norm,step_size`
//!
//! Blank lines and lines starting with `#` are skipped in every input format.

use std::fmt::Write as _;
use std::path::Path;

use crate::field::{AnisotropyTensor, TensorField};
use crate::optimize::TraceRow;
use crate::rvd::{Domain, HalfSpace, RestrictedCell, SeedSet};
use crate::{Error, Result, Vec3};

fn parse(line: usize, message: impl Into<String>) -> Error {
    Error::parse(line, message)
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn numbers(line: usize, s: &str, want: usize) -> Result<Vec<f64>> {
    let v: Vec<f64> = s
        .split_whitespace()
        .map(|t| t.parse::<f64>().map_err(|_| parse(line, format!("not a number: {t:?}"))))
        .collect::<Result<_>>()?;
    if v.len() != want {
        return Err(parse(line, format!("expected {want} numbers, found {}", v.len())));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(parse(line, "non-finite value"));
    }
    Ok(v)
}

pub fn parse_half_spaces(text: &str) -> Result<Vec<HalfSpace>> {
    content_lines(text)
        .map(|(n, l)| {
            let v = numbers(n, l, 4)?;
            HalfSpace::new(Vec3::new(v[0], v[1], v[2]), v[3]).map_err(|_| parse(n, "zero normal"))
        })
        .collect()
}

pub fn format_half_spaces(hs: &[HalfSpace]) -> String {
    let mut s = String::new();
    for h in hs {
        let _ = writeln!(s, "{:e} {:e} {:e} {:e}", h.normal.x, h.normal.y, h.normal.z, h.offset);
    }
    s
}

pub fn parse_obj(text: &str) -> Result<(Vec<Vec3>, Vec<[usize; 3]>)> {
    let mut verts = Vec::new();
    let mut faces = Vec::new();
    for (n, line) in content_lines(text) {
        let mut it = line.split_whitespace();
        match it.next() {
            Some("v") => {
                let rest: Vec<&str> = it.collect();
                if rest.len() < 3 {
                    return Err(parse(n, "vertex needs three coordinates"));
                }
                let v = numbers(n, &rest[..3].join(" "), 3)?;
                verts.push(Vec3::new(v[0], v[1], v[2]));
            }
            Some("f") => {
                let idx: Vec<usize> = it
                    .map(|t| {
                        let head = t.split('/').next().unwrap_or("");
                        let k: i64 = head.parse().map_err(|_| parse(n, format!("bad face index {t:?}")))?;
                        let k = if k < 0 { verts.len() as i64 + k } else { k - 1 };
                        if k < 0 || k as usize >= verts.len() {
                            return Err(parse(n, format!("face index {t} out of range")));
                        }
                        Ok(k as usize)
                    })
                    .collect::<Result<_>>()?;
                if idx.len() != 3 {
                    return Err(Error::NonTriangleFace {
                        line: n,
                        vertices: idx.len(),
                    });
                }
                faces.push([idx[0], idx[1], idx[2]]);
            }
            _ => {}
        }
    }
    Ok((verts, faces))
}

pub fn parse_off(text: &str) -> Result<(Vec<Vec3>, Vec<[usize; 3]>)> {
    let mut lines = content_lines(text);
    let (n0, first) = lines.next().ok_or_else(|| parse(1, "empty OFF file"))?;
    let counts_text = if first == "OFF" {
        lines.next().ok_or_else(|| parse(n0, "missing counts"))?
    } else if let Some(rest) = first.strip_prefix("OFF") {
        (n0, rest.trim())
    } else {
        return Err(parse(n0, "missing OFF header"));
    };
    let (nc, counts) = counts_text;
    let c: Vec<usize> = counts
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| parse(nc, "bad count")))
        .collect::<Result<_>>()?;
    if c.len() < 2 {
        return Err(parse(nc, "expected vertex and face counts"));
    }
    let mut verts = Vec::with_capacity(c[0]);
    for _ in 0..c[0] {
        let (n, l) = lines.next().ok_or_else(|| parse(nc, "missing vertex lines"))?;
        let toks: Vec<&str> = l.split_whitespace().take(3).collect();
        let v = numbers(n, &toks.join(" "), 3)?;
        verts.push(Vec3::new(v[0], v[1], v[2]));
    }
    let mut faces = Vec::with_capacity(c[1]);
    for _ in 0..c[1] {
        let (n, l) = lines.next().ok_or_else(|| parse(nc, "missing face lines"))?;
        let v: Vec<usize> = l
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| parse(n, format!("bad face entry {t:?}"))))
            .collect::<Result<_>>()?;
        let Some((&m, rest)) = v.split_first() else {
            return Err(parse(n, "empty face"));
        };
        if m != 3 {
            return Err(Error::NonTriangleFace { line: n, vertices: m });
        }
        if rest.len() < 3 {
            return Err(parse(n, "face has fewer indices than declared"));
        }
        if rest[..3].iter().any(|&k| k >= verts.len()) {
            return Err(parse(n, "face index out of range"));
        }
        faces.push([rest[0], rest[1], rest[2]]);
    }
    Ok((verts, faces))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainMode {
    Volume,
    Surface,
}

/// Volume mode reads a half-space file; surface mode reads OFF when the file
/// extension is `.off` or the content starts with `OFF`, OBJ otherwise.
pub fn parse_domain(text: &str, mode: DomainMode, off_hint: bool) -> Result<Domain> {
    match mode {
        DomainMode::Volume => Domain::volume(parse_half_spaces(text)?),
        DomainMode::Surface => {
            let off = off_hint || text.trim_start().starts_with("OFF");
            let (v, f) = if off { parse_off(text)? } else { parse_obj(text)? };
            Domain::surface(v, f)
        }
    }
}

pub fn load_domain(path: &Path, mode: DomainMode) -> Result<Domain> {
    let text = std::fs::read_to_string(path)?;
    let off = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("off"));
    parse_domain(&text, mode, off)
}

/// A single line gives a constant field (its position is ignored).
pub fn parse_tensor_field(text: &str) -> Result<TensorField> {
    let mut samples = Vec::new();
    for (n, l) in content_lines(text) {
        let v = numbers(n, l, 9)?;
        let g = AnisotropyTensor::new(v[3], v[4], v[5], v[6], v[7], v[8]);
        samples.push((Vec3::new(v[0], v[1], v[2]), g));
    }
    match samples.len() {
        0 => Err(Error::EmptyField),
        1 => TensorField::constant(samples[0].1),
        _ => TensorField::nearest(samples),
    }
}

pub fn load_tensor_field(path: &Path) -> Result<TensorField> {
    parse_tensor_field(&std::fs::read_to_string(path)?)
}

pub fn parse_seeds(text: &str) -> Result<SeedSet> {
    let pts = content_lines(text)
        .map(|(n, l)| numbers(n, l, 3).map(|v| Vec3::new(v[0], v[1], v[2])))
        .collect::<Result<Vec<_>>>()?;
    SeedSet::new(pts)
}

pub fn load_seeds(path: &Path) -> Result<SeedSet> {
    parse_seeds(&std::fs::read_to_string(path)?)
}

/// 17 significant digits, enough to round-trip every `f64`.
pub fn format_seeds(seeds: &SeedSet) -> String {
    let mut s = String::new();
    for p in &seeds.points {
        let _ = writeln!(s, "{:.16e} {:.16e} {:.16e}", p.x, p.y, p.z);
    }
    s
}

pub const TRACE_HEADER: &str = "iter,F,grad_inf_norm,step_size";

pub fn format_trace(trace: &[TraceRow]) -> String {
    let mut s = String::from(TRACE_HEADER);
    s.push('\n');
    for r in trace {
        let _ = writeln!(
            s,
            "{},{:.16e},{:.16e},{:.16e}",
            r.iter, r.energy, r.grad_inf_norm, r.step_size
        );
    }
    s
}

/// OBJ with one object per non-empty cell: boundary polygons in volume mode,
/// restricted polygons in surface mode.
pub fn format_rvd_obj(cells: &[RestrictedCell]) -> String {
    let mut s = String::new();
    let mut base = 1;
    for c in cells {
        if c.polygons.is_empty() {
            continue;
        }
        let _ = writeln!(s, "o cell_{}", c.seed_index);
        for poly in &c.polygons {
            for v in poly {
                let _ = writeln!(s, "v {:.16e} {:.16e} {:.16e}", v.x, v.y, v.z);
            }
        }
        for poly in &c.polygons {
            s.push('f');
            for k in 0..poly.len() {
                let _ = write!(s, " {}", base + k);
            }
            s.push('\n');
            base += poly.len();
        }
    }
    s
}

pub fn write_file(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content)?;
    Ok(())
}
