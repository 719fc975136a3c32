use std::fs::{File, OpenOptions};
use std::io::{self, Read, Write};
use std::path::Path;

use crate::{CliError, Result};

pub const STDIO: &str = "-";

/// Reads a whole operand from a path or standard input, dropping one
/// trailing newline (`\n` or `\r\n`).
pub fn read_operand(source: &str) -> Result<String> {
    let mut text = String::new();
    if source == STDIO {
        io::stdin()
            .read_to_string(&mut text)
            .map_err(CliError::io("reading standard input"))?;
    } else {
        File::open(source)
            .and_then(|mut f| f.read_to_string(&mut text))
            .map_err(CliError::io(format!("reading {source}")))?;
    }
    if text.ends_with('\n') {
        text.pop();
        if text.ends_with('\r') {
            text.pop();
        }
    }
    Ok(text)
}

/// Writes `text` to a path or standard output.
pub fn write_output(dest: &str, text: &str) -> Result<()> {
    if dest == STDIO {
        let mut out = io::stdout().lock();
        out.write_all(text.as_bytes())
            .and_then(|_| out.flush())
            .map_err(CliError::io("writing standard output"))
    } else {
        std::fs::write(dest, text).map_err(CliError::io(format!("writing {dest}")))
    }
}

/// Appends CSV lines to `path`, writing `header` first if the file is new or
/// empty.
pub fn append_csv(path: &Path, header: &str, row: &str) -> Result<()> {
    let ctx = || format!("appending to {}", path.display());
    let mut f = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(CliError::io(ctx()))?;
    let empty = f.metadata().map_err(CliError::io(ctx()))?.len() == 0;
    let mut text = String::new();
    if empty {
        text.push_str(header);
        text.push('\n');
    }
    text.push_str(row);
    text.push('\n');
    f.write_all(text.as_bytes()).map_err(CliError::io(ctx()))
}
