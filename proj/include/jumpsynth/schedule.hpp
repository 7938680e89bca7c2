#pragma once

#include <span>
#include <string>
#include <vector>

#include "jumpsynth/errors.hpp"

namespace jumpsynth {

/**
 * @brief Time-indexed mode assignment for a jump linear system.
 *
 * Each entry marks the step at which the active mode changes; the entry's
 * mode stays active until the next entry (or until total_steps). Mode
 * indices are 0-based throughout the library; serialized artifacts
 * (configs, CSV, summaries) present them 1-based.
 */
struct SwitchingSchedule {
    struct Entry {
        int jump_time = 0; ///< step index at which the mode becomes active
        int mode = 0;      ///< 0-based mode index
    };

    std::vector<Entry> entries;
    int total_steps = 0;

    /// Single-mode schedule covering [0, total_steps).
    static SwitchingSchedule constant(int mode, int total_steps) {
        SwitchingSchedule s;
        s.total_steps = total_steps;
        if (total_steps > 0) s.entries.push_back({0, mode});
        return s;
    }

    /// Builds a schedule from one mode per step, merging consecutive runs.
    static SwitchingSchedule from_step_modes(std::span<const int> step_modes) {
        SwitchingSchedule s;
        s.total_steps = static_cast<int>(step_modes.size());
        for (int k = 0; k < s.total_steps; ++k) {
            if (s.entries.empty() || s.entries.back().mode != step_modes[k])
                s.entries.push_back({k, step_modes[k]});
        }
        return s;
    }

    /// Mode active at `step`; throws InputError outside [0, total_steps).
    int mode_at(int step) const {
        if (step < 0 || step >= total_steps)
            throw InputError("schedule: step " + std::to_string(step) +
                             " outside covered range [0, " + std::to_string(total_steps) + ")");
        int mode = -1;
        for (const auto& e : entries) {
            if (e.jump_time > step) break;
            mode = e.mode;
        }
        if (mode < 0)
            throw InputError("schedule: no entry covers step " + std::to_string(step));
        return mode;
    }

    /// Step indices at which entries begin.
    std::vector<int> jump_times() const {
        std::vector<int> ts;
        ts.reserve(entries.size());
        for (const auto& e : entries) ts.push_back(e.jump_time);
        return ts;
    }

    /// Checks the structural invariants; `mode_count` bounds the mode indices.
    void validate(int mode_count) const {
        if (total_steps < 0) throw InputError("schedule: negative total_steps");
        if (total_steps == 0) {
            if (!entries.empty())
                throw InputError("schedule: entries present but total_steps is 0");
            return;
        }
        if (entries.empty() || entries.front().jump_time != 0)
            throw InputError("schedule: first entry must be at step 0");
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const auto& e = entries[i];
            if (e.mode < 0 || e.mode >= mode_count)
                throw InputError("schedule: entry " + std::to_string(i) + " has invalid mode index " +
                                 std::to_string(e.mode + 1));
            if (e.jump_time >= total_steps)
                throw InputError("schedule: entry " + std::to_string(i) + " starts at step " +
                                 std::to_string(e.jump_time) + " beyond total_steps");
            if (i > 0 && entries[i - 1].jump_time >= e.jump_time)
                throw InputError("schedule: jump times must be strictly increasing");
        }
    }
};

} // namespace jumpsynth
