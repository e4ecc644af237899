//! JSON-lines cycle cache. One line per continued cycle, keyed by
//! `(p, q, c, symbols, origin)` where `origin` is the point of the `c = 0`
//! cycle the continuation started from (a word can carry several cycles).
//! `source_c` and `steps` record where the line was continued from.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use corrdyn::{Complex64, Cycle};
use serde::Deserialize;
use serde_json::value::RawValue;
use serde_json::json;

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub p: u32,
    pub q: u32,
    pub c: Complex64,
    pub symbols: Vec<u32>,
    pub origin: Complex64,
    /// First point of the cached cycle.
    pub start: Complex64,
    /// The cycle's JSON line exactly as first written.
    pub cycle_json: String,
}

#[derive(Deserialize)]
struct Line<'a> {
    p: u32,
    q: u32,
    c: [f64; 2],
    symbols: Vec<u32>,
    origin: [f64; 2],
    #[serde(borrow)]
    cycle: &'a RawValue,
}

#[derive(Deserialize)]
struct CyclePoints {
    points: Vec<[f64; 2]>,
}

fn complex([re, im]: [f64; 2]) -> Complex64 {
    Complex64::new(re, im)
}

fn parse_line(line: &str) -> Option<Entry> {
    let l: Line = serde_json::from_str(line).ok()?;
    let pts: CyclePoints = serde_json::from_str(l.cycle.get()).ok()?;
    Some(Entry {
        p: l.p,
        q: l.q,
        c: complex(l.c),
        symbols: l.symbols,
        origin: complex(l.origin),
        start: complex(*pts.points.first()?),
        cycle_json: l.cycle.get().to_string(),
    })
}

pub struct Cache {
    path: PathBuf,
    entries: Vec<Entry>,
}

impl Cache {
    /// Loads `path`, which need not exist yet. Lines that do not parse are
    /// ignored.
    pub fn open(path: &Path) -> std::io::Result<Self> {
        let entries = match fs::read_to_string(path) {
            Ok(text) => text.lines().filter_map(parse_line).collect(),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Vec::new(),
            Err(e) => return Err(e),
        };
        Ok(Self { path: path.to_path_buf(), entries })
    }

    /// The exact entry, else the same cycle cached at the parameter closest
    /// to `c`.
    pub fn lookup(&self, p: u32, q: u32, c: Complex64, symbols: &[u32], origin: Complex64) -> Option<&Entry> {
        self.entries
            .iter()
            .filter(|e| e.p == p && e.q == q && e.symbols == symbols && e.origin == origin)
            .min_by(|a, b| (a.c - c).norm().total_cmp(&(b.c - c).norm()))
    }

    #[allow(clippy::too_many_arguments)]
    pub fn append(
        &mut self,
        p: u32,
        q: u32,
        c: Complex64,
        origin: Complex64,
        cycle: &Cycle,
        source_c: Complex64,
        steps: usize,
    ) -> std::io::Result<()> {
        let cycle_json = cycle.to_json_line();
        let head = json!({
            "p": p,
            "q": q,
            "c": [c.re, c.im],
            "symbols": cycle.symbols.symbols(),
            "origin": [origin.re, origin.im],
            "source_c": [source_c.re, source_c.im],
            "steps": steps,
        })
        .to_string();
        // splice the cycle in verbatim so a cache hit reprints the same bytes
        let line = format!("{},\"cycle\":{cycle_json}}}", head.trim_end_matches('}'));
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path)?;
        writeln!(f, "{line}")?;
        self.entries.push(Entry {
            p,
            q,
            c,
            symbols: cycle.symbols.symbols().to_vec(),
            origin,
            start: cycle.points[0],
            cycle_json,
        });
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use corrdyn::{cycle_from_symbols, Params, SymbolSequence};

    #[test]
    fn round_trips_and_finds_nearest() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cycles.jsonl");
        let zero = Complex64::new(0.0, 0.0);
        let origin = Complex64::new(-1.8369701987210297e-16, -1.0);
        let params = Params::new(6, 2, Complex64::new(0.0, 0.05)).unwrap();
        let cycle = cycle_from_symbols(&params, &SymbolSequence::new(2, vec![1]).unwrap(), origin).unwrap();
        let mut cache = Cache::open(&path).unwrap();
        cache.append(6, 2, params.c(), origin, &cycle, zero, 3).unwrap();
        let reopened = Cache::open(&path).unwrap();
        let hit = reopened.lookup(6, 2, Complex64::new(0.0, 0.1), &[1], origin).unwrap();
        assert_eq!(hit.c, params.c());
        assert_eq!(hit.start, cycle.points[0]);
        assert_eq!(hit.cycle_json, cycle.to_json_line());
        assert!(reopened.lookup(6, 2, params.c(), &[0], origin).is_none());
    }
}
