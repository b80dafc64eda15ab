use merozero::criterion::{classify_squared, classify_unit_weight, residuals, Classification, ResidualReport};
use merozero::kernel::PoleSequence;
use merozero::nevanlinna::{
    characteristic_samples, fit_order, geometric_grid, sequence_order, LogPlus, NevanlinnaSample, OrderEstimate,
    SequenceOrder,
};
use merozero::oracle::{direct_zero_power_sum, find_zeros_in_disk, KernelFunction, ZeroList};
use merozero::power_sums::{fprime_zero_power_sums, zero_power_sums, Route, ZeroPowerSums};
use merozero::{Error, KernelModel, Result, TruncationPolicy, ValueWithError};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Report,
    Zeros,
    Criterion,
    Oracle,
    Nevanlinna,
    Classify,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Document {
    Report(FullReport),
    Zeros(ZerosReport),
    Criterion(CriterionReport),
    Oracle(OracleReport),
    Nevanlinna(NevanlinnaReport),
    Classify(Classification),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZerosReport {
    pub kernel_order: u32,
    pub rho: f64,
    pub zeros_of_f: ZeroPowerSums,
    /// Simple kernels only.
    pub zeros_of_fprime_via_poles: Option<ZeroPowerSums>,
    pub zeros_of_fprime_via_zeros: Option<ZeroPowerSums>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub rho: f64,
    #[serde(flatten)]
    pub report: ResidualReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSum {
    pub n: u32,
    /// Over the located zeros only.
    pub direct: Complex64,
    pub formula: Option<ValueWithError>,
    /// `|formula − direct|`: the contribution of zeros outside the disk.
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub radius: f64,
    pub zeros: ZeroList,
    pub sums: Vec<OracleSum>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NevanlinnaReport {
    pub samples: Vec<NevanlinnaSample>,
    pub order: OrderEstimate,
    pub sequence_order: SequenceOrder,
}

/// A report section, or why it could not be produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Section<T> {
    Ok(T),
    Failed { error: String, numeric: bool },
    NotApplicable { reason: String },
}

impl<T> Section<T> {
    fn from_result(r: Result<T>) -> Self {
        match r {
            Ok(v) => Section::Ok(v),
            Err(e) => Section::Failed {
                error: e.to_string(),
                numeric: e.is_numeric(),
            },
        }
    }

    pub fn failure(&self) -> Option<(&str, bool)> {
        match self {
            Section::Failed { error, numeric } => Some((error, *numeric)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FullReport {
    pub zeros: Section<ZerosReport>,
    pub criterion: Section<CriterionReport>,
    pub oracle: Section<OracleReport>,
    pub nevanlinna: Section<NevanlinnaReport>,
    /// Zero-free unit-weight sums of kernel order 1 or 2 only.
    pub classify: Section<Classification>,
}

impl FullReport {
    /// Failed sections as `(name, message, numeric)`.
    pub fn failures(&self) -> Vec<(&'static str, &str, bool)> {
        [
            ("zeros", self.zeros.failure()),
            ("criterion", self.criterion.failure()),
            ("oracle", self.oracle.failure()),
            ("nevanlinna", self.nevanlinna.failure()),
            ("classify", self.classify.failure()),
        ]
        .into_iter()
        .filter_map(|(name, f)| f.map(|(msg, numeric)| (name, msg, numeric)))
        .collect()
    }
}

pub fn build(kind: Kind, model: &KernelModel, policy: &TruncationPolicy, n_max: u32, radius: f64) -> Result<Document> {
    Ok(match kind {
        Kind::Zeros => Document::Zeros(zeros(model, policy, n_max)?),
        Kind::Criterion => Document::Criterion(criterion(model, policy, n_max)?),
        Kind::Oracle => Document::Oracle(oracle(model, policy, n_max, radius)?),
        Kind::Nevanlinna => Document::Nevanlinna(nevanlinna(model, policy, radius)?),
        Kind::Classify => Document::Classify(classify(model, policy)?),
        Kind::Report => Document::Report(FullReport {
            zeros: Section::from_result(zeros(model, policy, n_max)),
            criterion: Section::from_result(criterion(model, policy, n_max)),
            oracle: Section::from_result(oracle(model, policy, n_max, radius)),
            nevanlinna: Section::from_result(nevanlinna(model, policy, radius)),
            classify: match classify(model, policy) {
                Err(e @ (Error::HypothesisViolated(_) | Error::InvalidSpec(_))) => Section::NotApplicable {
                    reason: e.to_string(),
                },
                r => Section::from_result(r),
            },
        }),
    })
}

fn rho(model: &KernelModel) -> f64 {
    model.convergence_index()
}

fn zeros(model: &KernelModel, policy: &TruncationPolicy, n_max: u32) -> Result<ZerosReport> {
    let rho = rho(model);
    let simple = model.kernel_order() == 1;
    let fprime = |route| -> Result<Option<ZeroPowerSums>> {
        if simple {
            fprime_zero_power_sums(model, n_max, rho, policy, route).map(Some)
        } else {
            Ok(None)
        }
    };
    Ok(ZerosReport {
        kernel_order: model.kernel_order(),
        rho,
        zeros_of_f: zero_power_sums(model, n_max, rho, policy)?,
        zeros_of_fprime_via_poles: fprime(Route::ViaPoles)?,
        zeros_of_fprime_via_zeros: fprime(Route::ViaZeros)?,
    })
}

fn criterion(model: &KernelModel, policy: &TruncationPolicy, n_max: u32) -> Result<CriterionReport> {
    let rho = rho(model);
    Ok(CriterionReport {
        rho,
        report: residuals(model, n_max, rho, policy)?,
    })
}

fn oracle(model: &KernelModel, policy: &TruncationPolicy, n_max: u32, radius: f64) -> Result<OracleReport> {
    let f = KernelFunction::new(model, *policy);
    let zeros = find_zeros_in_disk(&f, radius)?;
    let formula = zero_power_sums(model, n_max, rho(model), policy)?;
    let sums = (0..=n_max)
        .map(|n| {
            let direct = direct_zero_power_sum(&zeros, n, None)?.value;
            let formula = formula.get(n);
            Ok(OracleSum {
                n,
                direct,
                formula,
                delta: formula.map(|v| (v.value - direct).norm()),
            })
        })
        .collect::<Result<_>>()?;
    Ok(OracleReport { radius, zeros, sums })
}

fn nevanlinna(model: &KernelModel, policy: &TruncationPolicy, radius: f64) -> Result<NevanlinnaReport> {
    let f = KernelFunction::new(model, *policy);
    let grid = geometric_grid(radius / 1000.0, radius, 10);
    let samples = characteristic_samples(&f, &grid, LogPlus::Standard)?;
    let order = fit_order(&samples.iter().map(|s| (s.r, s.characteristic)).collect::<Vec<_>>())?;
    let poles = match &model.spec().poles {
        PoleSequence::List { .. } => PoleSequence::List {
            values: model.explicit_terms().iter().map(|t| t.pole).collect(),
        },
        seq => seq.clone(),
    };
    Ok(NevanlinnaReport {
        samples,
        order,
        sequence_order: sequence_order(&poles, &grid)?,
    })
}

fn classify(model: &KernelModel, policy: &TruncationPolicy) -> Result<Classification> {
    match model.kernel_order() {
        1 => classify_unit_weight(model, policy),
        2 => classify_squared(model, policy),
        m => Err(Error::InvalidSpec(format!(
            "classification covers kernel orders 1 and 2, the spec has {m}"
        ))),
    }
}
