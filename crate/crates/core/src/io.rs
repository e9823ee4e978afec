//! Pair-stream files.
//!
//! The binary format is a flat sequence of little-endian `u32 x, u32 y`
//! records. The CSV format holds one `x,y` record per line, with an optional
//! `x,y` header line.

use std::fs::File;
use std::io::{self, BufRead, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{ChhError, Result};

const CHUNK: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairFormat {
    #[default]
    Binary,
    Csv,
}

impl FromStr for PairFormat {
    type Err = ChhError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "binary" | "bin" | "binary-u32-pairs" => Ok(PairFormat::Binary),
            "csv" => Ok(PairFormat::Csv),
            other => Err(ChhError::Usage(format!("unknown pair format '{other}'"))),
        }
    }
}

/// Streams binary records, reading the input in fixed-size chunks.
pub struct BinaryPairReader<R> {
    inner: R,
    buf: Vec<u8>,
    pos: usize,
    len: usize,
    offset: u64,
    done: bool,
}

impl<R: Read> BinaryPairReader<R> {
    pub fn new(inner: R) -> Self {
        Self {
            inner,
            buf: vec![0; CHUNK],
            pos: 0,
            len: 0,
            offset: 0,
            done: false,
        }
    }

    /// Refills so that at least `want` bytes are buffered, or EOF is hit.
    fn fill(&mut self, want: usize) -> io::Result<()> {
        if self.len - self.pos >= want {
            return Ok(());
        }
        self.buf.copy_within(self.pos..self.len, 0);
        self.len -= self.pos;
        self.pos = 0;
        while self.len < want {
            match self.inner.read(&mut self.buf[self.len..]) {
                Ok(0) => break,
                Ok(n) => self.len += n,
                Err(e) if e.kind() == io::ErrorKind::Interrupted => continue,
                Err(e) => return Err(e),
            }
        }
        Ok(())
    }
}

impl<R: Read> Iterator for BinaryPairReader<R> {
    type Item = Result<(u32, u32)>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        if let Err(e) = self.fill(8) {
            self.done = true;
            return Some(Err(e.into()));
        }
        let avail = self.len - self.pos;
        if avail == 0 {
            self.done = true;
            return None;
        }
        if avail < 8 {
            self.done = true;
            let field = if avail >= 4 { 4 } else { 0 };
            return Some(Err(ChhError::ParseBinary {
                offset: self.offset + field,
                msg: format!("truncated record: {avail} trailing bytes"),
            }));
        }
        let b = &self.buf[self.pos..self.pos + 8];
        let x = u32::from_le_bytes([b[0], b[1], b[2], b[3]]);
        let y = u32::from_le_bytes([b[4], b[5], b[6], b[7]]);
        self.pos += 8;
        self.offset += 8;
        Some(Ok((x, y)))
    }
}

fn parse_csv_field(s: &str, line: u64) -> Result<u32> {
    s.trim().parse().map_err(|_| ChhError::ParseCsv {
        line,
        msg: format!("'{s}' is not an unsigned 32-bit integer"),
    })
}

/// Streams `x,y` lines; line numbers in errors are 1-based.
pub struct CsvPairReader<R> {
    records: csv::StringRecordsIntoIter<R>,
    first: bool,
    done: bool,
}

impl<R: Read> CsvPairReader<R> {
    pub fn new(inner: R) -> Self {
        let records = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .buffer_capacity(CHUNK)
            .from_reader(inner)
            .into_records();
        Self {
            records,
            first: true,
            done: false,
        }
    }
}

impl<R: Read> Iterator for CsvPairReader<R> {
    type Item = Result<(u32, u32)>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        loop {
            let rec = match self.records.next()? {
                Ok(r) => r,
                Err(e) => {
                    self.done = true;
                    return Some(Err(e.into()));
                }
            };
            let line = rec.position().map_or(0, |p| p.line());
            let header = std::mem::replace(&mut self.first, false)
                && rec.len() == 2
                && rec[0].trim() == "x"
                && rec[1].trim() == "y";
            if header {
                continue;
            }
            if rec.len() != 2 {
                self.done = true;
                return Some(Err(ChhError::ParseCsv {
                    line,
                    msg: format!("expected 2 fields, found {}", rec.len()),
                }));
            }
            let parsed = parse_csv_field(&rec[0], line)
                .and_then(|x| parse_csv_field(&rec[1], line).map(|y| (x, y)));
            if parsed.is_err() {
                self.done = true;
            }
            return Some(parsed);
        }
    }
}

pub type PairIter = Box<dyn Iterator<Item = Result<(u32, u32)>> + Send>;

pub fn pair_reader<R: Read + Send + 'static>(inner: R, format: PairFormat) -> PairIter {
    match format {
        PairFormat::Binary => Box::new(BinaryPairReader::new(inner)),
        PairFormat::Csv => Box::new(CsvPairReader::new(inner)),
    }
}

/// Opens `path` (or stdin for `-`).
pub fn open_pairs(path: &Path, format: PairFormat) -> Result<PairIter> {
    if path.as_os_str() == "-" {
        return Ok(pair_reader(io::stdin(), format));
    }
    Ok(pair_reader(File::open(path)?, format))
}

pub fn write_pairs<W: Write, I: IntoIterator<Item = (u32, u32)>>(
    out: W,
    pairs: I,
    format: PairFormat,
) -> Result<u64> {
    let mut w = BufWriter::with_capacity(CHUNK, out);
    let mut n = 0u64;
    match format {
        PairFormat::Binary => {
            for (x, y) in pairs {
                w.write_all(&x.to_le_bytes())?;
                w.write_all(&y.to_le_bytes())?;
                n += 1;
            }
        }
        PairFormat::Csv => {
            for (x, y) in pairs {
                writeln!(w, "{x},{y}")?;
                n += 1;
            }
        }
    }
    w.flush()?;
    Ok(n)
}

/// Writes through a temporary file in the destination directory and renames
/// it into place, so a failed run never leaves a partial file behind.
pub fn write_atomically<F>(path: &Path, body: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    {
        let mut w = BufWriter::new(tmp.as_file_mut());
        body(&mut w)?;
        w.flush()?;
    }
    tmp.persist(path).map_err(|e| ChhError::Io(e.error))?;
    Ok(())
}

/// Convenience for small inputs: collects every pair or fails on the first
/// malformed record.
pub fn read_all<B: BufRead + Send + 'static>(
    inner: B,
    format: PairFormat,
) -> Result<Vec<(u32, u32)>> {
    pair_reader(inner, format).collect()
}
