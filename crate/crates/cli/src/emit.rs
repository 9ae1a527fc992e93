use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use ktree_core::exact::to_f64;
use ktree_core::BigRational;

use crate::Failure;

/// Buffered writer to a file, or stdout when no path is given.
pub fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    match path {
        Some(p) => {
            let f = File::create(p).map_err(|e| io_failure(p, e))?;
            Ok(Box::new(BufWriter::new(f)))
        }
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

pub fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

pub fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

pub fn write_err(e: io::Error) -> Failure {
    Failure::Io(e.to_string())
}

pub fn csv_err(e: csv::Error) -> Failure {
    Failure::Io(e.to_string())
}

/// Numerator, denominator and a rounded double for one exact rational.
pub fn rational_fields(q: &BigRational) -> [String; 3] {
    [
        q.numer().to_string(),
        q.denom().to_string(),
        format!("{:.6}", to_f64(q)),
    ]
}
