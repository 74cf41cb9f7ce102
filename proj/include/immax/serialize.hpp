#pragma once

#include "immax/losses.hpp"
#include "immax/scorer.hpp"
#include "immax/train.hpp"

#include <map>
#include <string>

namespace immax {

std::string loss_kind_name(LossKind kind);
LossKind loss_kind_from_name(const std::string& name);

std::string psi_kind_name(PsiKind kind);
PsiKind psi_kind_from_name(const std::string& name);

/// Flat key=value form, e.g. loss=immax, rho=0.2,0.8, tau=0.5. Only the keys
/// the kind reads are emitted.
std::map<std::string, std::string> loss_spec_to_config(const LossSpec& spec);
LossSpec loss_spec_from_config(const std::map<std::string, std::string>& config);

/// Versioned flat text format; reals at 17 significant digits, weights
/// row-major.
void save_scorer(const Scorer& scorer, const std::string& path);
Scorer load_scorer(const std::string& path);

/// CSV trace: epoch,objective,train_error.
void save_trace(const TrainTrace& trace, const std::string& path,
                const std::string& comment = "");

/// Formats a real with 17 significant digits (round-trip exact).
std::string format_real(Real value);

/// Shortest decimal form that still parses back to the same double; used for
/// config entries where rho=0.2,0.8 beats the full 17-digit spelling.
std::string format_real_shortest(Real value);

/// Parses a flat key=value config file ('#' comments, blank lines skipped).
std::map<std::string, std::string> load_config_file(const std::string& path);

}  // namespace immax
