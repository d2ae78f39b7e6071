#include <sstream>

#include <json.hpp>

#include "sist/error.hpp"
#include "sist/pipeline.hpp"

namespace sist {
namespace {

using Json = nlohmann::ordered_json;

const char* mode_name(RelaxMode m) {
    return m == RelaxMode::ShiftedWindow ? "shifted_window" : "subsequence_dp";
}

RelaxMode parse_mode(const std::string& s) {
    if (s == "shifted_window") return RelaxMode::ShiftedWindow;
    if (s == "subsequence_dp") return RelaxMode::SubsequenceDP;
    fail(ErrorCode::CorruptModel, "unknown relax mode '" + s + "'");
}

const char* scope_name(OverlapScope s) {
    return s == OverlapScope::AnySeries ? "any_series" : "same_series";
}

OverlapScope parse_scope(const std::string& s) {
    if (s == "any_series") return OverlapScope::AnySeries;
    if (s == "same_series") return OverlapScope::SameSeries;
    fail(ErrorCode::CorruptModel, "unknown overlap scope '" + s + "'");
}

Json hyperparams_json(const Hyperparams& hp) {
    return Json{{"delete_overlap", hp.delete_overlap},
                {"shapelet_length", hp.shapelet_length},
                {"left_relax", hp.left_relax},
                {"right_relax", hp.right_relax},
                {"num_shapelets", hp.num_shapelets},
                {"relax_mode", mode_name(hp.relax_mode)},
                {"overlap_scope", scope_name(hp.overlap_scope)},
                {"reg_c", hp.reg_c},
                {"tol", hp.tol},
                {"max_iter", hp.max_iter},
                {"standardize", hp.standardize},
                {"seed", hp.seed}};
}

Hyperparams hyperparams_from(const Json& j) {
    Hyperparams hp;
    hp.delete_overlap = j.at("delete_overlap").get<bool>();
    hp.shapelet_length = j.at("shapelet_length").get<std::size_t>();
    hp.left_relax = j.at("left_relax").get<int>();
    hp.right_relax = j.at("right_relax").get<int>();
    hp.num_shapelets = j.at("num_shapelets").get<std::size_t>();
    hp.relax_mode = parse_mode(j.at("relax_mode").get<std::string>());
    hp.overlap_scope = parse_scope(j.at("overlap_scope").get<std::string>());
    hp.reg_c = j.at("reg_c").get<double>();
    hp.tol = j.at("tol").get<double>();
    hp.max_iter = j.at("max_iter").get<int>();
    hp.standardize = j.at("standardize").get<bool>();
    hp.seed = j.at("seed").get<std::uint64_t>();
    return hp;
}

Json timings_json(const StageTimings& t) {
    return Json{{"extraction_s", t.extraction_s}, {"scoring_s", t.scoring_s},
                {"ranking_s", t.ranking_s},       {"transform_s", t.transform_s},
                {"classifier_s", t.classifier_s}, {"total_s", t.total_s}};
}

StageTimings timings_from(const Json& j) {
    StageTimings t;
    t.extraction_s = j.at("extraction_s").get<double>();
    t.scoring_s = j.at("scoring_s").get<double>();
    t.ranking_s = j.at("ranking_s").get<double>();
    t.transform_s = j.at("transform_s").get<double>();
    t.classifier_s = j.at("classifier_s").get<double>();
    t.total_s = j.at("total_s").get<double>();
    return t;
}

}  // namespace

std::string hyperparams_to_json(const Hyperparams& hp) { return hyperparams_json(hp).dump(2) + "\n"; }

std::string cv_table_csv(const GridResult& g) {
    std::ostringstream out;
    out.precision(17);
    out << "delete_overlap,shapelet_length,left_relax,right_relax,num_shapelets,mean_accuracy";
    const std::size_t folds = g.table.empty() ? 0 : g.table.front().fold_accuracy.size();
    for (std::size_t f = 0; f < folds; ++f) out << ",fold_" << (f + 1);
    out << '\n';
    for (const auto& cell : g.table) {
        const auto& hp = cell.hp;
        out << (hp.delete_overlap ? "true" : "false") << ',' << hp.shapelet_length << ','
            << hp.left_relax << ',' << hp.right_relax << ',' << hp.num_shapelets << ','
            << cell.mean_accuracy;
        for (double a : cell.fold_accuracy) out << ',' << a;
        out << '\n';
    }
    return out.str();
}

std::string save_model(const SistModel& model, bool with_timings) {
    Json shapelets = Json::array();
    for (const auto& m : model.basis.members) {
        shapelets.push_back(Json{{"source_index", m.candidate.source_index},
                                 {"offset", m.candidate.offset},
                                 {"class_sign", m.candidate.class_sign},
                                 {"priority", m.grq},
                                 {"values", m.candidate.values}});
    }
    const auto& lin = model.linear;
    const auto& prov = model.provenance;
    Json j{
        {"format", "sist-model"},
        {"version", kModelSchemaVersion},
        {"hyperparams", hyperparams_json(model.hyperparams)},
        {"basis",
         {{"length", model.basis.length},
          {"relax",
           {{"left", model.basis.config.left},
            {"right", model.basis.config.right},
            {"mode", mode_name(model.basis.config.mode)}}},
          {"overlap_deleted", model.basis.overlap_deleted},
          {"overlap_scope", scope_name(model.basis.scope)},
          {"shapelets", shapelets}}},
        {"linear",
         {{"weights", lin.weights},
          {"bias", lin.bias},
          {"reg_c", lin.reg_c},
          {"label_negative", lin.label_map.negative},
          {"label_positive", lin.label_map.positive},
          {"iterations", lin.meta.iterations},
          {"converged", lin.meta.converged},
          {"final_objective", lin.meta.final_objective},
          {"seed", lin.meta.seed}}},
        {"provenance",
         {{"dataset", prov.dataset_name},
          {"train_size", prov.train_size},
          {"series_length", prov.series_length},
          {"builder", prov.builder},
          {"candidates_examined", prov.candidates_examined},
          {"training_accuracy", prov.training_accuracy},
          {"timings", timings_json(with_timings ? prov.timings : StageTimings{})}}},
    };
    return j.dump(2) + "\n";
}

SistModel load_model(std::string_view text) {
    Json j;
    try {
        j = Json::parse(text.begin(), text.end());
    } catch (const Json::exception& e) {
        fail(ErrorCode::CorruptModel, std::string("unparseable model: ") + e.what());
    }
    try {
        if (!j.is_object() || j.value("format", "") != "sist-model") {
            fail(ErrorCode::CorruptModel, "not a sist model file");
        }
        const int version = j.at("version").get<int>();
        if (version != kModelSchemaVersion) {
            fail(ErrorCode::SchemaVersionMismatch,
                 "model schema v" + std::to_string(version) + ", reader supports v" +
                     std::to_string(kModelSchemaVersion));
        }

        SistModel model;
        model.hyperparams = hyperparams_from(j.at("hyperparams"));

        const Json& prov = j.at("provenance");
        model.provenance.dataset_name = prov.at("dataset").get<std::string>();
        model.provenance.train_size = prov.at("train_size").get<std::size_t>();
        model.provenance.series_length = prov.at("series_length").get<std::size_t>();
        model.provenance.builder = prov.at("builder").get<std::string>();
        model.provenance.candidates_examined = prov.at("candidates_examined").get<std::size_t>();
        model.provenance.training_accuracy = prov.at("training_accuracy").get<double>();
        model.provenance.timings = timings_from(prov.at("timings"));

        const Json& basis = j.at("basis");
        model.basis.length = basis.at("length").get<std::size_t>();
        model.basis.config.left = basis.at("relax").at("left").get<int>();
        model.basis.config.right = basis.at("relax").at("right").get<int>();
        model.basis.config.mode = parse_mode(basis.at("relax").at("mode").get<std::string>());
        model.basis.overlap_deleted = basis.at("overlap_deleted").get<bool>();
        model.basis.scope = parse_scope(basis.at("overlap_scope").get<std::string>());
        for (const Json& s : basis.at("shapelets")) {
            ScoredCandidate sc;
            sc.candidate.source_index = s.at("source_index").get<std::size_t>();
            sc.candidate.offset = s.at("offset").get<std::size_t>();
            sc.candidate.class_sign = s.at("class_sign").get<int>();
            sc.candidate.values = s.at("values").get<std::vector<double>>();
            sc.grq = s.at("priority").get<double>();
            if (sc.candidate.length() != model.basis.length ||
                sc.candidate.offset + sc.candidate.length() > model.provenance.series_length) {
                fail(ErrorCode::CorruptModel, "shapelet does not fit the recorded series length");
            }
            model.basis.members.push_back(std::move(sc));
        }

        const Json& lin = j.at("linear");
        model.linear.weights = lin.at("weights").get<std::vector<double>>();
        model.linear.bias = lin.at("bias").get<double>();
        model.linear.reg_c = lin.at("reg_c").get<double>();
        model.linear.label_map.negative = lin.at("label_negative").get<std::string>();
        model.linear.label_map.positive = lin.at("label_positive").get<std::string>();
        model.linear.meta.iterations = lin.at("iterations").get<int>();
        model.linear.meta.converged = lin.at("converged").get<bool>();
        model.linear.meta.final_objective = lin.at("final_objective").get<double>();
        model.linear.meta.seed = lin.at("seed").get<std::uint64_t>();
        if (model.linear.weights.size() != model.basis.size() || model.basis.empty()) {
            fail(ErrorCode::CorruptModel, "weight count does not match shapelet count");
        }
        return model;
    } catch (const Json::exception& e) {
        fail(ErrorCode::CorruptModel, std::string("malformed model: ") + e.what());
    }
}

std::string eval_report_json(const EvalReport& r) {
    Json j{{"accuracy", r.accuracy},
           {"n_test", r.n_test},
           {"labels", {r.label_map.negative, r.label_map.positive}},
           {"confusion", {{r.confusion[0][0], r.confusion[0][1]}, {r.confusion[1][0], r.confusion[1][1]}}},
           {"train_time_s", r.train_time_s},
           {"transform_time_s", r.transform_time_s},
           {"predict_time_s", r.predict_time_s}};
    return j.dump(2) + "\n";
}

std::string eval_report_csv_header() {
    return "dataset,n_test,accuracy,true_neg,false_pos,false_neg,true_pos,train_time_s,"
           "transform_time_s,predict_time_s";
}

std::string eval_report_csv_row(const EvalReport& r, std::string_view dataset_name) {
    std::ostringstream out;
    out.precision(17);
    out << dataset_name << ',' << r.n_test << ',' << r.accuracy << ',' << r.confusion[0][0] << ','
        << r.confusion[0][1] << ',' << r.confusion[1][0] << ',' << r.confusion[1][1] << ','
        << r.train_time_s << ',' << r.transform_time_s << ',' << r.predict_time_s;
    return out.str();
}

}  // namespace sist
