#pragma once

// Executes a RunConfig: evaluates the requested sweep or protocol and writes
// the CSV table or structured report to config.output. Outputs are
// deterministic functions of the config (plus the seed for sampled sections).

#include "config.hpp"
#include "protocols.hpp"

#include <string>

namespace ebs {

// CSV columns: detuning,abs_t,abs_r,abs_t0,abs_r0,arg_t,arg_r,arg_t0,arg_r0
void run_spectra(const RunConfig& config);

// CSV columns: axis,F_t,F_r
void run_fidelity_sweep(const RunConfig& config);

// Structured text report; with seed and samples set, a sampled trajectory
// log (std::mt19937_64, 53-bit uniform draws) is appended.
void run_protocol(const RunConfig& config);

// Dispatch on config.mode. mode_override, when non-empty, must agree with
// the config ("spectra" | "fidelity" | "protocol").
void run(const RunConfig& config, const std::string& mode_override = "");

// In-memory versions used by the file writers and the tests.
std::string spectra_csv(const RunConfig& config);
std::string fidelity_csv(const RunConfig& config);
std::string protocol_report(const RunConfig& config);

// Builds the channel a config describes (the perfect channel when
// config.ideal is set). which = 0 uses config.detuning, which = 1 uses
// detuning2 when present.
EBSChannel channel_from_config(const RunConfig& config, int which = 0);

ProtocolResult run_protocol_result(const RunConfig& config);

} // namespace ebs
