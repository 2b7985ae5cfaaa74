// Copyright 2026 The qbp Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

//! CSV emission: header row, comma separator, LF line endings, UTF-8, floats
//! at 17 significant digits. Identical inputs produce byte-identical files.

use crate::CliError;
pub use qbp_core::fmt::sig17;

pub struct Csv {
    buffer: String,
    columns: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut buffer = header.join(",");
        buffer.push('\n');
        Self {
            buffer,
            columns: header.len(),
        }
    }

    pub fn row(&mut self, cells: &[String]) {
        assert_eq!(
            cells.len(),
            self.columns,
            "column count fixed per subcommand"
        );
        self.buffer.push_str(&cells.join(","));
        self.buffer.push('\n');
    }

    /// Write to `out`, or stdout when absent.
    pub fn emit(self, out: Option<&str>) -> Result<(), CliError> {
        match out {
            Some(path) => std::fs::write(path, self.buffer)
                .map_err(|e| CliError::usage(format!("cannot write {path}: {e}"))),
            None => {
                print!("{}", self.buffer);
                Ok(())
            }
        }
    }
}
