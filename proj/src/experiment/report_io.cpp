#include "mibci/experiment/report_io.hpp"

#include <cmath>

namespace mibci::experiment {

using nlohmann::json;

namespace {

json names(const std::vector<ClassLabel>& classes) {
    json a = json::array();
    for (const auto& c : classes) a.push_back(c.name());
    return a;
}

// JSON has no infinity; non-finite values are written as null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json to_json(const ConfusionMatrix& cm) { return {{"classes", names(cm.classes)}, {"counts", cm.counts}}; }

json to_json(const Metrics& m, const std::vector<ClassLabel>& classes) {
    json sens = json::object();
    for (std::size_t k = 0; k < classes.size(); ++k)
        sens[classes[k].name()] = m.sensitivities[k] ? json(*m.sensitivities[k]) : json(nullptr);
    return {{"accuracy", m.accuracy}, {"kappa", m.kappa}, {"sensitivities", sens}};
}

json to_json(const RunReport& r, bool with_history) {
    json j = to_json(r.metrics, r.confusion.classes);
    j["confusion"] = to_json(r.confusion);
    j["epochs_trained"] = r.epochs_trained;
    j["best_epoch"] = r.best_epoch;
    j["stop_reason"] = to_string(r.stop_reason);
    if (with_history) {
        json h = json::array();
        for (const auto& e : r.history)
            h.push_back({{"epoch", e.epoch},
                         {"train_loss", number(e.train_loss)},
                         {"train_accuracy", e.train_accuracy},
                         {"val_loss", number(e.val_loss)}});
        j["history"] = h;
    }
    return j;
}

json to_json(const Summary& s) { return {{"mean", s.mean}, {"std", s.std}, {"min", s.min}, {"max", s.max}}; }

json to_json(const RepeatedStats& s) {
    json sens = json::object();
    for (std::size_t k = 0; k < s.classes.size(); ++k)
        sens[s.classes[k].name()] = s.sensitivities[k] ? to_json(*s.sensitivities[k]) : json(nullptr);
    json runs = json::array();
    for (const auto& r : s.runs) runs.push_back(to_json(r, false));
    return {{"n_runs", s.n_runs},
            {"classes", names(s.classes)},
            {"accuracy", to_json(s.accuracy)},
            {"kappa", to_json(s.kappa)},
            {"sensitivities", sens},
            {"runs", runs}};
}

json to_json(const OvaReport& r) {
    json j = to_json(r.report, false);
    auto counts = [](const std::map<ClassLabel, std::size_t>& m) {
        json o = json::object();
        for (const auto& [label, n] : m) o[label.name()] = n;
        return o;
    };
    j["train_counts"] = counts(r.train_counts);
    j["test_counts"] = counts(r.test_counts);
    json origins = json::array();
    for (const auto& o : r.test_origins)
        origins.push_back({{"origin", o.origin.name()}, {"total", o.total}, {"predicted_target", o.predicted_target}});
    j["test_origins"] = origins;
    return j;
}

json to_json(const std::map<ClassLabel, OvaReport>& reports) {
    json j = json::object();
    for (const auto& [label, r] : reports) j[label.name()] = to_json(r);
    return j;
}

json to_json(const TTestResult& r) {
    return {{"t", number(r.t)},
            {"p_two_sided", r.p_two_sided},
            {"p_one_sided", r.p_one_sided},
            {"mean_difference", r.mean_difference},
            {"dof", r.dof},
            {"degenerate", r.degenerate}};
}

}  // namespace mibci::experiment
