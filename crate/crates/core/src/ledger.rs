//! Cumulative exergy ledger.
//!
//! Each entry is the signed contribution of one term to the vehicle exergy:
//! traction is positive, everything that removes availability is negative.
//! `X_veh(t) = X_veh(0) + sum of closure terms`, where the closure terms are
//! every term except the informational fuel-exergy input (the five engine
//! outputs already account for it).

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Trac,
    Brake,
    Roll,
    Aero,
    Batt,
    DestBatt,
    HeatBatt,
    HeatMot,
    DestMot,
    FuelEng,
    WorkEng,
    ExhEng,
    HeatEng,
    FricEng,
    CombEng,
}

impl Term {
    pub const ALL: [Term; 15] = [
        Term::Trac,
        Term::Brake,
        Term::Roll,
        Term::Aero,
        Term::Batt,
        Term::DestBatt,
        Term::HeatBatt,
        Term::HeatMot,
        Term::DestMot,
        Term::FuelEng,
        Term::WorkEng,
        Term::ExhEng,
        Term::HeatEng,
        Term::FricEng,
        Term::CombEng,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Term::Trac => "E_trac",
            Term::Brake => "E_brake",
            Term::Roll => "E_roll",
            Term::Aero => "E_aero",
            Term::Batt => "E_batt",
            Term::DestBatt => "X_dest_batt",
            Term::HeatBatt => "X_heat_batt",
            Term::HeatMot => "X_heat_mot",
            Term::DestMot => "X_dest_mot",
            Term::FuelEng => "X_fuel_eng",
            Term::WorkEng => "X_work_eng",
            Term::ExhEng => "X_exh_eng",
            Term::HeatEng => "X_heat_eng",
            Term::FricEng => "X_fric_eng",
            Term::CombEng => "X_comb_eng",
        }
    }

    /// Whether the term enters `X_veh`. Only the fuel input is excluded.
    pub fn in_closure(self) -> bool {
        self != Term::FuelEng
    }

    /// Destruction terms, which can only be zero or negative.
    pub fn is_destruction(self) -> bool {
        matches!(
            self,
            Term::DestBatt | Term::DestMot | Term::CombEng | Term::FricEng
        )
    }

    pub fn category(self) -> Option<Category> {
        Some(match self {
            Term::Roll => Category::Roll,
            Term::Aero => Category::Aero,
            Term::Brake => Category::Brake,
            Term::Trac | Term::Batt | Term::WorkEng => Category::Powertrain,
            Term::DestBatt | Term::HeatBatt => Category::Battery,
            Term::HeatMot | Term::DestMot => Category::Motor,
            Term::CombEng => Category::Combustion,
            Term::ExhEng => Category::Exhaust,
            Term::HeatEng => Category::EngineHeat,
            Term::FricEng => Category::EngineFriction,
            Term::FuelEng => return None,
        })
    }

    fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Term {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Term::ALL
            .into_iter()
            .find(|t| t.id() == s)
            .ok_or_else(|| Error::UnknownTerm(s.to_string()))
    }
}

/// Groups of terms used in the loss breakdown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    Roll,
    Aero,
    Brake,
    /// Net conversion loss between the sources and the wheels:
    /// `E_trac - E_batt (+ X_work)` in ledger signs.
    Powertrain,
    Battery,
    Motor,
    Combustion,
    Exhaust,
    EngineHeat,
    EngineFriction,
}

impl Category {
    pub const ALL: [Category; 10] = [
        Category::Roll,
        Category::Aero,
        Category::Brake,
        Category::Powertrain,
        Category::Battery,
        Category::Motor,
        Category::Combustion,
        Category::Exhaust,
        Category::EngineHeat,
        Category::EngineFriction,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Category::Roll => "roll",
            Category::Aero => "aero",
            Category::Brake => "brake",
            Category::Powertrain => "pwt",
            Category::Battery => "battery",
            Category::Motor => "motor",
            Category::Combustion => "comb",
            Category::Exhaust => "exh",
            Category::EngineHeat => "heat_eng",
            Category::EngineFriction => "fric_eng",
        }
    }

    /// Terms attributed to the combustion engine.
    pub fn is_engine(self) -> bool {
        matches!(
            self,
            Category::Combustion
                | Category::Exhaust
                | Category::EngineHeat
                | Category::EngineFriction
        )
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Share {
    pub category: Category,
    /// Loss in J, positive when availability is lost.
    pub loss: f64,
    pub percent: f64,
}

/// Loss breakdown relative to `X_veh(0) - X_veh(t_f)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LossReport {
    pub total_loss: f64,
    pub shares: Vec<Share>,
}

impl LossReport {
    pub fn is_empty(&self) -> bool {
        self.shares.is_empty()
    }

    pub fn percent(&self, category: Category) -> Option<f64> {
        self.shares
            .iter()
            .find(|s| s.category == category)
            .map(|s| s.percent)
    }

    pub fn percent_sum(&self) -> f64 {
        self.shares.iter().map(|s| s.percent).sum()
    }

    /// Shares ordered from the largest loss to the smallest.
    pub fn ranked(&self) -> Vec<Share> {
        let mut v = self.shares.clone();
        v.sort_by(|a, b| b.loss.total_cmp(&a.loss));
        v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExergyLedger {
    x0: f64,
    totals: [f64; 15],
    x_veh: Vec<f64>,
}

impl ExergyLedger {
    /// Starts an empty ledger with initial vehicle exergy `x0` (J) and
    /// records it as the first trajectory sample.
    pub fn new(x0: f64) -> Self {
        let x_veh = alloc::vec![x0];
        Self {
            x0,
            totals: [0.0; 15],
            x_veh,
        }
    }

    pub fn add(&mut self, term: Term, joules: f64) {
        self.totals[term.slot()] += joules;
    }

    /// Adds `watts * dt`.
    pub fn add_rate(&mut self, term: Term, watts: f64, dt: f64) {
        self.add(term, watts * dt);
    }

    pub fn add_by_id(&mut self, id: &str, joules: f64) -> Result<()> {
        self.add(id.parse()?, joules);
        Ok(())
    }

    pub fn total(&self, term: Term) -> f64 {
        self.totals[term.slot()]
    }

    pub fn totals(&self) -> impl Iterator<Item = (Term, f64)> + '_ {
        Term::ALL.into_iter().map(|t| (t, self.total(t)))
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    /// Sum of every term that enters `X_veh`.
    pub fn closure_sum(&self) -> f64 {
        Term::ALL
            .into_iter()
            .filter(|t| t.in_closure())
            .map(|t| self.total(t))
            .sum()
    }

    /// Current vehicle exergy.
    pub fn x_veh(&self) -> f64 {
        self.x0 + self.closure_sum()
    }

    /// Appends the current `X_veh` to the trajectory.
    pub fn sample(&mut self) {
        let x = self.x_veh();
        self.x_veh.push(x);
    }

    pub fn trajectory(&self) -> &[f64] {
        &self.x_veh
    }

    /// `X_veh` divided by the maximum storable exergy.
    pub fn relative_trajectory(&self, x_max: f64) -> Vec<f64> {
        self.x_veh.iter().map(|x| x / x_max).collect()
    }

    pub fn category_total(&self, category: Category) -> f64 {
        Term::ALL
            .into_iter()
            .filter(|t| t.category() == Some(category))
            .map(|t| self.total(t))
            .sum()
    }

    /// Percentage breakdown of the total loss. Empty when nothing was lost.
    pub fn close(&self) -> LossReport {
        let total_loss = -self.closure_sum();
        if total_loss == 0.0 || !total_loss.is_finite() {
            return LossReport::default();
        }
        let shares = Category::ALL
            .into_iter()
            .filter_map(|c| {
                let loss = -self.category_total(c);
                let touched = Term::ALL
                    .into_iter()
                    .any(|t| t.category() == Some(c) && self.total(t) != 0.0);
                touched.then(|| Share {
                    category: c,
                    loss,
                    percent: 100.0 * loss / total_loss,
                })
            })
            .collect();
        LossReport { total_loss, shares }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_rate_integrates_to_joules() {
        let mut l = ExergyLedger::new(0.0);
        for _ in 0..100 {
            l.add_rate(Term::Roll, -1.0, 1.0);
        }
        assert_eq!(l.total(Term::Roll), -100.0);
    }

    #[test]
    fn all_zero_run_has_empty_breakdown() {
        let l = ExergyLedger::new(5.0);
        assert!(l.close().is_empty());
        assert_eq!(l.x_veh(), 5.0);
    }

    #[test]
    fn two_terms_split_proportionally() {
        let mut l = ExergyLedger::new(1000.0);
        l.add(Term::Roll, -60.0);
        l.add(Term::Aero, -40.0);
        let r = l.close();
        assert_eq!(r.total_loss, 100.0);
        assert_eq!(r.percent(Category::Roll), Some(60.0));
        assert_eq!(r.percent(Category::Aero), Some(40.0));
        assert_eq!(r.shares.len(), 2);
    }

    #[test]
    fn fuel_input_is_outside_closure() {
        let mut l = ExergyLedger::new(10.0);
        l.add(Term::FuelEng, 50.0);
        l.add(Term::CombEng, -3.0);
        assert_eq!(l.x_veh(), 7.0);
        assert_eq!(l.close().percent(Category::Combustion), Some(100.0));
    }

    #[test]
    fn powertrain_category_nets_traction_against_sources() {
        let mut l = ExergyLedger::new(0.0);
        l.add(Term::Trac, 90.0);
        l.add(Term::Batt, -100.0);
        assert_eq!(l.category_total(Category::Powertrain), -10.0);
    }

    #[test]
    fn term_ids_round_trip() {
        for t in Term::ALL {
            assert_eq!(t.id().parse::<Term>().unwrap(), t);
        }
        assert_eq!(
            "X_bogus".parse::<Term>(),
            Err(Error::UnknownTerm("X_bogus".into()))
        );
        let mut l = ExergyLedger::new(0.0);
        assert!(l.add_by_id("nope", 1.0).is_err());
        l.add_by_id("X_dest_mot", -2.0).unwrap();
        assert_eq!(l.total(Term::DestMot), -2.0);
    }

    #[test]
    fn trajectory_records_samples() {
        let mut l = ExergyLedger::new(100.0);
        l.add(Term::Roll, -1.0);
        l.sample();
        assert_eq!(l.trajectory(), &[100.0, 99.0]);
        assert_eq!(l.relative_trajectory(200.0), alloc::vec![0.5, 0.495]);
    }
}
