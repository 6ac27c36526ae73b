//! Matplotlib script generation for emitted CSV files.

use std::path::Path;

use crate::table::{HEADER, LANDSCAPE_HEADER};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CsvKind {
    Sweep,
    Landscape,
}

pub fn detect_kind(csv_path: &Path) -> Result<CsvKind, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .from_path(csv_path)
        .map_err(|e| CliError::Csv(csv_path.display().to_string(), e))?;
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| CliError::Csv(csv_path.display().to_string(), e))?
        .iter()
        .map(str::to_string)
        .collect();
    if header == HEADER {
        Ok(CsvKind::Sweep)
    } else if header == LANDSCAPE_HEADER {
        Ok(CsvKind::Landscape)
    } else {
        Err(CliError::Config(format!("{}: unrecognized CSV header", csv_path.display())))
    }
}

pub fn plot_script(csv_path: &Path) -> Result<String, CliError> {
    let kind = detect_kind(csv_path)?;
    let path = csv_path.display().to_string().replace('\\', "\\\\").replace('\'', "\\'");
    let body = match kind {
        CsvKind::Sweep => SWEEP_TEMPLATE,
        CsvKind::Landscape => LANDSCAPE_TEMPLATE,
    };
    Ok(body.replace("@CSV@", &path))
}

const SWEEP_TEMPLATE: &str = r#"#!/usr/bin/env python3
import csv
from collections import defaultdict

import matplotlib.pyplot as plt

series = defaultdict(lambda: ([], [], []))
with open('@CSV@', newline='') as fh:
    for row in csv.DictReader(fh):
        if not row['energy']:
            continue
        xs, es, ns = series[(row['method'], row['label'])]
        xs.append(float(row['g']))
        es.append(float(row['energy']))
        ns.append(float(row['mean_photon']) if row['mean_photon'] else float('nan'))

fig, (ax_e, ax_n) = plt.subplots(1, 2, figsize=(10, 4))
for (method, label), (xs, es, ns) in sorted(series.items()):
    style = 'o' if method == 'exact' else '-'
    ax_e.plot(xs, es, style, ms=3, label=f'{method} {label}')
    ax_n.plot(xs, ns, style, ms=3, label=f'{method} {label}')
ax_e.set_xlabel('g')
ax_e.set_ylabel('energy')
ax_n.set_xlabel('g')
ax_n.set_ylabel('mean photon number')
ax_e.legend(fontsize='small')
fig.tight_layout()
plt.show()
"#;

const LANDSCAPE_TEMPLATE: &str = r#"#!/usr/bin/env python3
import csv

import matplotlib.pyplot as plt

lam, k, comps, minima = [], [], [[], [], [], []], []
with open('@CSV@', newline='') as fh:
    reader = csv.reader(fh)
    names = next(reader)[2:]
    for row in reader:
        if row[0] == 'minimum':
            minima.append((float(row[1]), float(row[2])))
        elif row[0] == 'classification':
            title = row[1]
        else:
            lam.append(float(row[0]))
            k.append(float(row[1]))
            for c, v in zip(comps, row[2:]):
                c.append(float(v))

fig, ax = plt.subplots(figsize=(6, 4))
ax.plot(lam, k, 'k-', label='K')
for name, c in zip(names, comps):
    ax.plot(lam, c, '--', label=name)
for x, y in minima:
    ax.annotate('', xy=(x, y), xytext=(x, y + 0.1 * max(k)), arrowprops=dict(arrowstyle='->'))
ax.set_xlabel('lambda')
ax.set_yscale('log')
ax.set_title(title)
ax.legend(fontsize='small')
fig.tight_layout()
plt.show()
"#;
