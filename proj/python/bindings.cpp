#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>

#include "exeplan/assets.hpp"
#include "exeplan/error.hpp"
#include "exeplan/metrics.hpp"
#include "exeplan/session.hpp"
#include "exeplan/training.hpp"

namespace py = pybind11;
using namespace exeplan;

namespace {

Formula formula_arg(const std::string& name) {
  auto f = formula_from_name(name);
  if (!f) throw py::value_error("unknown formula: " + name);
  return *f;
}

CompileMode mode_arg(const std::string& name) {
  auto m = mode_from_name(name);
  if (!m) throw py::value_error("mode must be 'literal' or 'exeplan'");
  return *m;
}

py::dict mes_dict(const Mes& mes) {
  py::dict d;
  d["preconditions"] = mes.precon ? py::cast(*mes.precon) : py::none();
  d["location"] = mes.loc ? py::cast(*mes.loc) : py::none();
  d["actions"] = mes.act ? py::cast(*mes.act) : py::none();
  d["tool"] = mes.tool ? py::cast(*mes.tool) : py::none();
  d["human_requirements"] = mes.req ? py::cast(*mes.req) : py::none();
  return d;
}

py::list steps_list(const std::vector<PlanStep>& steps) {
  py::list out;
  for (const auto& s : steps) {
    py::dict d = mes_dict(s.mes);
    d["formula"] = std::string(formula_name(s.formula));
    out.append(d);
  }
  return out;
}

std::vector<std::string> formula_names(const std::vector<Formula>& fs) {
  std::vector<std::string> out;
  for (auto f : fs) out.emplace_back(formula_name(f));
  return out;
}

FormulaSet formula_set(const std::vector<std::string>& names) {
  FormulaSet s;
  for (const auto& n : names) s.set(index_of(formula_arg(n)));
  return s;
}

py::dict plan_dict(const ExecutablePlan& plan) {
  py::dict d;
  d["task_type"] = plan.task_type;
  d["steps"] = steps_list(plan.steps);
  d["transitions"] = formula_names(plan.transitions);
  d["executability"] = plan.executability;
  d["threshold"] = plan.threshold;
  d["executable"] = plan.executable;
  return d;
}

py::dict result_dict(const CompileResult& r) {
  py::dict d;
  d["ok"] = r.ok();
  d["task_type"] = r.task_type ? py::cast(*r.task_type) : py::none();
  d["extracted"] = steps_list(r.extracted);
  if (r.ok()) {
    d["plan"] = plan_dict(r.plan());
    d["document"] = export_plan(r.plan());
  } else {
    const auto& f = r.failure();
    py::dict fd;
    fd["stage"] = std::string(stage_name(f.stage));
    fd["details"] = f.details;
    fd["message"] = f.message;
    fd["partial"] = f.partial ? py::object(plan_dict(*f.partial)) : py::none();
    d["failure"] = fd;
  }
  return d;
}

py::list document_list(const ParsedDocument& doc) {
  py::list out;
  for (const auto& s : doc.sentences) {
    py::list tokens, edges;
    for (const auto& t : s.tokens) {
      tokens.append(py::make_tuple(t.surface, t.lemma, std::string(pos_name(t.pos))));
    }
    for (const auto& e : s.edges) {
      const py::object head = e.head == kVirtualRoot ? py::object(py::none()) : py::object(py::cast(e.head));
      edges.append(py::make_tuple(std::string(relation_name(e.relation)), head, e.dependent));
    }
    py::dict d;
    d["text"] = s.raw;
    d["tokens"] = tokens;
    d["edges"] = edges;
    d["has_verb"] = s.has_verb;
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_exeplan, m) {
  m.doc() = "Compile natural-language task instructions into executable robot plans";

  auto base = py::register_exception<Error>(m, "ExeplanError");
  py::register_exception<SchemaError>(m, "SchemaError", base.ptr());
  py::register_exception<RefuseNonExecutable>(m, "RefuseNonExecutable", base.ptr());
  py::register_exception<NonConvergence>(m, "NonConvergence", base.ptr());

  m.def("data_dir", &data_dir);
  m.def("formula_names", [] {
    std::vector<std::string> out;
    for (auto f : kAllFormulas) out.emplace_back(formula_name(f));
    return out;
  });

  py::class_<Lexicon>(m, "Lexicon")
      .def_static("load", &Lexicon::load, py::arg("path"))
      .def("serialize", &Lexicon::serialize);

  py::class_<MlnModel>(m, "MlnModel")
      .def(py::init<>())
      .def_readwrite("task_types", &MlnModel::task_types)
      .def_property(
          "weights",
          [](const MlnModel& mm) {
            std::vector<std::vector<double>> rows;
            for (const auto& r : mm.weights) rows.emplace_back(r.begin(), r.end());
            return rows;
          },
          [](MlnModel& mm, const std::vector<std::vector<double>>& rows) {
            if (rows.size() != mm.task_types.size()) throw py::value_error("one weight row per task type");
            for (std::size_t t = 0; t < rows.size(); ++t) {
              if (rows[t].size() != kFormulaCount) throw py::value_error("each row needs nine weights");
              std::copy(rows[t].begin(), rows[t].end(), mm.weights[t].begin());
            }
          })
      .def("serialize", [](const MlnModel& mm) { return serialize_model(mm); })
      .def_static("parse", [](const std::string& text) { return parse_model(text); })
      .def_static("load", [](const std::filesystem::path& p) { return load_model(p); })
      .def(py::self == py::self);

  py::class_<Models, std::shared_ptr<Models>>(m, "Models")
      .def_readonly("planner", &Models::planner)
      .def_property_readonly("kb_json", [](const Models& mm) { return mm.kb.serialize(); });

  m.def(
      "load_models",
      [](std::optional<std::filesystem::path> lexicon, std::optional<std::filesystem::path> detector,
         std::optional<std::filesystem::path> planner, std::optional<std::filesystem::path> kb) {
        ModelPaths paths;
        if (lexicon) paths.lexicon = *lexicon;
        if (detector) paths.detector = *detector;
        if (planner) paths.planner = *planner;
        if (kb) paths.kb = *kb;
        return std::make_shared<Models>(load_models(paths));
      },
      py::arg("lexicon") = py::none(), py::arg("detector") = py::none(), py::arg("planner") = py::none(),
      py::arg("kb") = py::none());

  m.def(
      "default_world", [] { return serialize_world(load_world(default_world_path())); },
      "World state JSON shipped with the models");

  m.def(
      "parse_document",
      [](const std::string& text, const Models& models) { return document_list(parse_document(text, models.lexicon)); },
      py::arg("text"), py::arg("models"));

  m.def(
      "detect",
      [](const std::string& text, const Models& models) {
        const auto det = detect(parse_document(text, models.lexicon), models.detector, models.lexicon);
        py::list mentions;
        for (const auto& mm : det.mentions) {
          mentions.append(py::make_tuple(std::string(formula_name(mm.label)), mm.site.sentence, mm.site.token));
        }
        py::dict d;
        d["mentions"] = mentions;
        d["transitions"] = formula_names(det.transitions);
        return d;
      },
      py::arg("text"), py::arg("models"));

  m.def(
      "compile",
      [](const std::string& text, const Models& models, const std::string& world_json, double threshold,
         const std::string& mode) {
        CompileOptions o;
        o.threshold = threshold;
        o.mode = mode_arg(mode);
        const WorldState world = parse_world(world_json);
        CompileResult r;
        {
          py::gil_scoped_release release;
          r = compile(text, models, world, o);
        }
        return result_dict(r);
      },
      py::arg("text"), py::arg("models"), py::arg("world_json"), py::arg("threshold") = kDefaultThreshold,
      py::arg("mode") = "exeplan");

  m.def(
      "apply_plan",
      [](const std::string& plan_document, const std::string& world_json) {
        return serialize_world(apply_plan(parse_plan(plan_document), parse_world(world_json)));
      },
      py::arg("plan_document"), py::arg("world_json"));

  m.def(
      "canonical_plan", [](const std::string& doc) { return export_plan(parse_plan(doc)); },
      "Parse a plan document and export it again in canonical form");

  m.def(
      "score_plan",
      [](const MlnModel& model, const std::string& task, const std::vector<std::string>& sequence) {
        std::vector<PlanStep> steps;
        for (const auto& n : sequence) steps.push_back({formula_arg(n), Mes{}});
        return score_plan(model, task, ground(std::move(steps)));
      },
      py::arg("model"), py::arg("task"), py::arg("sequence"));

  m.def(
      "classify_task",
      [](const MlnModel& model, const std::vector<std::string>& satisfied) {
        const auto d = classify_task(model, formula_set(satisfied));
        return py::make_tuple(model.task_types.at(d.task), d.scores);
      },
      py::arg("model"), py::arg("satisfied"));

  m.def(
      "select_plan",
      [](const MlnModel& model, const std::string& task, const std::vector<std::string>& candidates) {
        std::vector<PlanStep> steps;
        for (const auto& n : candidates) steps.push_back({formula_arg(n), Mes{}});
        return formula_names(select_plan(model, task, std::move(steps)).sequence());
      },
      py::arg("model"), py::arg("task"), py::arg("candidates"));

  m.def(
      "generate_corpus",
      [](std::size_t n_docs, std::uint64_t seed, double distractor_rate, double omission_rate, double reorder_rate,
         const Models& models) {
        CorpusConfig c;
        c.n_docs = n_docs;
        c.seed = seed;
        c.distractor_rate = distractor_rate;
        c.omission_rate = omission_rate;
        c.reorder_rate = reorder_rate;
        return serialize_corpus(generate_corpus(c, models.lexicon));
      },
      py::arg("n_docs") = 600, py::arg("seed") = 1, py::arg("distractor_rate") = 0.3, py::arg("omission_rate") = 0.5,
      py::arg("reorder_rate") = 0.1, py::arg("models"));

  m.def(
      "canonical_corpus", [](const std::string& jsonl) { return serialize_corpus(parse_corpus(jsonl)); },
      py::arg("jsonl"));

  m.def(
      "train_planner",
      [](const std::string& corpus_jsonl, double c, double epsilon) {
        SsvmOptions o;
        o.c = c;
        o.epsilon = epsilon;
        const MlnModel defaults;
        const auto r = train_planner(parse_corpus(corpus_jsonl), defaults.task_types, o);
        return py::make_tuple(r.model, r.iterations, r.final_violation);
      },
      py::arg("corpus_jsonl"), py::arg("c") = kPlannerC, py::arg("epsilon") = 1e-3);

  m.def(
      "eval_disambiguation",
      [](const Models& models, const std::string& corpus_jsonl) {
        return report_json(eval_disambiguation(models.detector, models.lexicon, parse_corpus(corpus_jsonl)));
      },
      py::arg("models"), py::arg("corpus_jsonl"));

  m.def(
      "eval_plans",
      [](const Models& models, const std::string& corpus_jsonl, const std::string& mode, double threshold) {
        PlanEvalOptions o;
        o.mode = mode_arg(mode);
        o.threshold = threshold;
        const auto corpus = parse_corpus(corpus_jsonl);
        py::gil_scoped_release release;
        return report_json(eval_plans(models, corpus, o));
      },
      py::arg("models"), py::arg("corpus_jsonl"), py::arg("mode") = "exeplan",
      py::arg("threshold") = kDefaultThreshold);

  py::class_<SessionState>(m, "Session")
      .def(py::init([](std::shared_ptr<Models> models, const std::string& world_json, double threshold,
                       const std::string& mode, bool json) {
             SessionState s;
             s.models = std::move(models);
             s.world = parse_world(world_json);
             s.options.threshold = threshold;
             s.options.mode = mode_arg(mode);
             s.json = json;
             return s;
           }),
           py::arg("models"), py::arg("world_json"), py::arg("threshold") = kDefaultThreshold,
           py::arg("mode") = "exeplan", py::arg("json") = false)
      .def("turn", [](SessionState& s, const std::string& line) { return repl_turn(s, line); }, py::arg("line"))
      .def_property_readonly("world_json", [](const SessionState& s) { return serialize_world(s.world); })
      .def_property_readonly("transcript", [](const SessionState& s) {
        py::list out;
        for (const auto& t : s.transcript) {
          py::dict d;
          d["instruction"] = t.instruction;
          d["executable"] = t.executable;
          d["stage"] = t.stage ? py::cast(std::string(stage_name(*t.stage))) : py::none();
          d["rendered"] = t.rendered;
          out.append(d);
        }
        return out;
      });
}
