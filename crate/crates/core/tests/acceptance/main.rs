mod cli;
mod criteria;
mod examples;
mod invariants;
