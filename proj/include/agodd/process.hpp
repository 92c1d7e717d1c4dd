#pragma once

#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "agodd/model.hpp"

// Condition-dependent process execution: which start/end attribute states
// a world satisfies, which events fire which processes, and how firing
// rewrites the world state.

namespace agodd {

// Mutable world the process engine threads through a simulation. Values
// are keyed by dimension; elapsed time accumulates per unit symbol, never
// converted.
struct WorldState {
    std::map<std::string, std::variant<Quantity, std::string>> values;
    std::map<std::string, double> elapsed;

    bool operator==(const WorldState&) const = default;
};

struct InteractionEvent {
    CdvTag tag;  // a condition (C) tag

    bool operator==(const InteractionEvent&) const = default;
};

struct ElapsedEvent {
    double duration = 0.0;
    std::string unit;

    bool operator==(const ElapsedEvent&) const = default;
};

struct MeasuredEvent {
    std::string dimension;
    Quantity value;

    bool operator==(const MeasuredEvent&) const = default;
};

using ProcessEvent = std::variant<InteractionEvent, ElapsedEvent, MeasuredEvent>;

// Why a process did not fire on an event.
struct NoFire {
    std::string reason;  // "trigger-mismatch" or "start-unsatisfied"
    std::string detail;
};

struct SimulationStep {
    ProcessEvent event;
    std::vector<std::string> fired;  // process names, declaration order
    WorldState state;                // after the event
};

struct SimulationTrace {
    WorldState initial;
    std::vector<SimulationStep> steps;

    const WorldState& final_state() const {
        return steps.empty() ? initial : steps.back().state;
    }
};

// Start/end tags whose attribute state the world currently satisfies: the
// tagged node's constrained dimensions all carry values inside their
// effective domains. Tags on unconstrained nodes are satisfied vacuously.
std::set<CdvTag> satisfied_tags(const WorldState& state, const AgOdd& odd);

// Static plausibility of every process definition against the model:
// resolvable tags, satisfiable start and end states, well-typed triggers
// and end values. Presupposes validate_model passed.
std::vector<Diagnostic> check_processes(const AgOdd& odd);

// Fires `process` on `event` if the trigger matches and the start state is
// satisfied. On firing, every dimension the end attributes constrain is
// projected to the nearest admissible point (end value overrides win).
// Unit mismatches between event and declaration throw
// Error("unit-mismatch").
std::variant<WorldState, NoFire> fire_trigger(const WorldState& state,
                                              const ProcessDef& process,
                                              const ProcessEvent& event,
                                              const AgOdd& odd);

// Runs an event list against all processes of the ODD. Measured and
// elapsed events update the state before processes are offered the event;
// several processes may fire on one event, in declaration order, each
// seeing its predecessor's output state. Deterministic.
SimulationTrace simulate(const WorldState& initial, const AgOdd& odd,
                         const std::vector<ProcessEvent>& events);

std::string render_event(const ProcessEvent& event);

}  // namespace agodd
