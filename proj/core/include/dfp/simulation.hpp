#pragma once

#include <functional>

#include "dfp/process.hpp"
#include "dfp/run_record.hpp"

namespace dfp {

/// Called after every apply_edge; used by tests to check invariants per step.
using StepObserver = std::function<void(const ProcessState&, const UpdateDelta&)>;

/// Runs sample_open + apply_edge until the stop rule fires. Snapshots are
/// taken at i = 0, every stride steps, and at the final state.
RunRecord run(ProcessState& state, const StopRule& stop, const RecordRule& record,
              const StepObserver& observer = {});

}  // namespace dfp
