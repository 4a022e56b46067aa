#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>

#include "hdrank/commands.hpp"
#include "hdrank/dataset.hpp"
#include "hdrank/encoding.hpp"
#include "hdrank/error.hpp"
#include "hdrank/metrics.hpp"
#include "hdrank/model_io.hpp"
#include "hdrank/ranking.hpp"

namespace py = pybind11;
using namespace hdrank;

namespace {

using DArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using IArray = py::array_t<int, py::array::c_style | py::array::forcecast>;

Hypervector to_hv(const DArray& arr) {
  if (arr.ndim() != 1) throw py::value_error("expected a 1-D array");
  Hypervector hv(static_cast<std::size_t>(arr.shape(0)));
  std::memcpy(hv.data(), arr.data(), sizeof(double) * hv.dim());
  return hv;
}

DArray from_hv(const Hypervector& hv) {
  DArray arr(py::array::ShapeContainer{static_cast<py::ssize_t>(hv.dim())});
  std::memcpy(arr.mutable_data(), hv.data(), sizeof(double) * hv.dim());
  return arr;
}

std::vector<Hypervector> to_hv_rows(const DArray& arr) {
  if (arr.ndim() != 2) throw py::value_error("expected an (N, D) array");
  const auto n = static_cast<std::size_t>(arr.shape(0));
  const auto d = static_cast<std::size_t>(arr.shape(1));
  std::vector<Hypervector> rows(n, Hypervector(d));
  for (std::size_t i = 0; i < n; ++i)
    std::memcpy(rows[i].data(), arr.data(i, 0), sizeof(double) * d);
  return rows;
}

DArray from_hv_rows(const std::vector<Hypervector>& rows) {
  const auto n = static_cast<py::ssize_t>(rows.size());
  const auto d = static_cast<py::ssize_t>(rows.empty() ? 0 : rows.front().dim());
  DArray arr(py::array::ShapeContainer{n, d});
  for (py::ssize_t i = 0; i < n; ++i)
    std::memcpy(arr.mutable_data(i, 0), rows[static_cast<std::size_t>(i)].data(),
                sizeof(double) * static_cast<std::size_t>(d));
  return arr;
}

// (N, T) arrays convert to the per-task column layout used internally.
std::vector<std::vector<int>> to_int_columns(const IArray& arr) {
  if (arr.ndim() != 2) throw py::value_error("expected an (N, T) array");
  const auto n = static_cast<std::size_t>(arr.shape(0));
  const auto t = static_cast<std::size_t>(arr.shape(1));
  std::vector<std::vector<int>> cols(t, std::vector<int>(n));
  auto view = arr.unchecked<2>();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < t; ++j)
      cols[j][i] = view(static_cast<py::ssize_t>(i), static_cast<py::ssize_t>(j));
  return cols;
}

py::array_t<int> from_int_columns(const std::vector<std::vector<int>>& cols) {
  const auto t = static_cast<py::ssize_t>(cols.size());
  const auto n = static_cast<py::ssize_t>(cols.empty() ? 0 : cols.front().size());
  py::array_t<int> arr(py::array::ShapeContainer{n, t});
  auto view = arr.mutable_unchecked<2>();
  for (py::ssize_t j = 0; j < t; ++j)
    for (py::ssize_t i = 0; i < n; ++i)
      view(i, j) = cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
  return arr;
}

DArray from_double_columns(const std::vector<std::vector<double>>& cols) {
  const auto t = static_cast<py::ssize_t>(cols.size());
  const auto n = static_cast<py::ssize_t>(cols.empty() ? 0 : cols.front().size());
  DArray arr(py::array::ShapeContainer{n, t});
  auto view = arr.mutable_unchecked<2>();
  for (py::ssize_t j = 0; j < t; ++j)
    for (py::ssize_t i = 0; i < n; ++i)
      view(i, j) = cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
  return arr;
}

std::vector<std::string> numbered_tasks(std::size_t count) {
  std::vector<std::string> names;
  for (std::size_t t = 1; t <= count; ++t) names.push_back("task_" + std::to_string(t));
  return names;
}

RankTable make_rank_table(const IArray& ranks, std::vector<std::string> task_names) {
  RankTable table;
  table.ranks = to_int_columns(ranks);
  table.task_names =
      task_names.empty() ? numbered_tasks(table.ranks.size()) : std::move(task_names);
  if (table.task_names.size() != table.ranks.size())
    throw py::value_error("task_names length does not match the rank column count");
  validate_rank_table(table);
  return table;
}

TrainConfig make_config(double gamma, double mu, const std::string& weight_mode,
                        int retrain_epochs, double decay, double stop_threshold, int threads) {
  return train_config_from(gamma, mu, weight_mode, retrain_epochs, decay, stop_threshold,
                           threads);
}

}  // namespace

PYBIND11_MODULE(_hdrank, m) {
  m.doc() = "Hyperdimensional-computing surrogate for ranking transformer architectures";

  py::register_exception<Error>(m, "HdrankError");

  // --- hypervector algebra --------------------------------------------------
  m.def(
      "random_bipolar",
      [](std::uint64_t master_seed, const std::string& label, std::size_t dim) {
        return from_hv(random_bipolar({master_seed, label}, dim));
      },
      py::arg("master_seed"), py::arg("label"), py::arg("dim"),
      "Deterministic bipolar hypervector for (seed, label).");
  m.def(
      "hv_add", [](const DArray& a, const DArray& b) { return from_hv(hv_add(to_hv(a), to_hv(b))); },
      py::arg("a"), py::arg("b"));
  m.def(
      "hv_mult",
      [](const DArray& a, const DArray& b) { return from_hv(hv_mult(to_hv(a), to_hv(b))); },
      py::arg("a"), py::arg("b"));
  m.def(
      "hv_permute",
      [](const DArray& a, std::int64_t n) { return from_hv(hv_permute(to_hv(a), n)); },
      py::arg("a"), py::arg("n"));
  m.def(
      "cap_bipolarize", [](const DArray& a) { return from_hv(cap_bipolarize(to_hv(a))); },
      py::arg("a"));
  m.def(
      "cosine_similarity",
      [](const DArray& a, const DArray& b) { return cosine_similarity(to_hv(a), to_hv(b)); },
      py::arg("a"), py::arg("b"));

  // --- architectures and encoding -------------------------------------------
  py::class_<ArchDescriptor>(m, "ArchDescriptor")
      .def(py::init([](const std::vector<int>& heads, const std::vector<int>& mlps) {
             if (heads.size() != mlps.size())
               throw py::value_error("heads and mlps must have equal length");
             ArchDescriptor arch;
             arch.layers.resize(heads.size());
             for (std::size_t i = 0; i < heads.size(); ++i)
               arch.layers[i] = LayerParams{heads[i], mlps[i]};
             validate_arch(arch);
             return arch;
           }),
           py::arg("heads"), py::arg("mlps"))
      .def_property_readonly("depth", [](const ArchDescriptor& a) { return a.depth(); })
      .def_property_readonly("heads",
                             [](const ArchDescriptor& a) {
                               std::vector<int> v;
                               for (const auto& lp : a.layers) v.push_back(lp.head_code);
                               return v;
                             })
      .def_property_readonly("mlps", [](const ArchDescriptor& a) {
        std::vector<int> v;
        for (const auto& lp : a.layers) v.push_back(lp.mlp_code);
        return v;
      });

  py::class_<ItemMemorySet>(m, "ItemMemorySet")
      .def_property_readonly("dim", &ItemMemorySet::dim)
      .def_property_readonly("master_seed", &ItemMemorySet::master_seed)
      .def("head", [](const ItemMemorySet& s, int code) { return from_hv(s.head(code)); },
           py::arg("code"))
      .def("mlp", [](const ItemMemorySet& s, int code) { return from_hv(s.mlp(code)); },
           py::arg("code"))
      .def("depth", [](const ItemMemorySet& s, std::size_t pos) { return from_hv(s.depth(pos)); },
           py::arg("position"));

  m.def("build_item_memories", &build_item_memories, py::arg("master_seed"), py::arg("dim"));
  m.def(
      "encode_gram",
      [](const ArchDescriptor& arch, const ItemMemorySet& mems) {
        return from_hv(encode_gram(arch, mems));
      },
      py::arg("arch"), py::arg("mems"));
  m.def(
      "encode_record",
      [](const ArchDescriptor& arch, const ItemMemorySet& mems) {
        return from_hv(encode_record(arch, mems));
      },
      py::arg("arch"), py::arg("mems"));
  m.def(
      "encode_batch",
      [](const std::vector<ArchDescriptor>& archs, const ItemMemorySet& mems,
         const std::string& scheme, int threads) {
        return from_hv_rows(encode_batch(archs, mems, scheme_from_string(scheme), threads));
      },
      py::arg("archs"), py::arg("mems"), py::arg("scheme") = "record", py::arg("threads") = 0,
      "Encode architectures into an (N, D) matrix.");

  // --- training and prediction ----------------------------------------------
  py::class_<AssociativeMemory>(m, "Model")
      .def_property_readonly("dim", [](const AssociativeMemory& mdl) { return mdl.dim; })
      .def_property_readonly("task_names",
                             [](const AssociativeMemory& mdl) { return mdl.task_names; })
      .def_property_readonly("scheme",
                             [](const AssociativeMemory& mdl) {
                               return std::string(to_string(mdl.scheme));
                             })
      .def_property_readonly("master_seed",
                             [](const AssociativeMemory& mdl) { return mdl.master_seed; })
      .def("task_hvs", [](const AssociativeMemory& mdl) { return from_hv_rows(mdl.task_hvs); },
           "Task vectors as a (T, D) matrix.");

  m.def(
      "ranks_to_weights",
      [](const IArray& ranks, double mu, const std::string& mode,
         std::vector<std::string> task_names) {
        const RankTable table = make_rank_table(ranks, std::move(task_names));
        return from_double_columns(
            ranks_to_weights(table, mu, weight_mode_from_string(mode)).weights);
      },
      py::arg("ranks"), py::arg("mu") = 1.0, py::arg("mode") = "semantic",
      py::arg("task_names") = std::vector<std::string>{},
      "Convert an (N, T) rank matrix into the matching weight matrix.");

  m.def(
      "train",
      [](const DArray& encoded, const IArray& ranks, std::vector<std::string> task_names,
         const std::string& scheme, std::uint64_t master_seed, double gamma, double mu,
         const std::string& weight_mode, int retrain_epochs, double decay, double stop_threshold,
         int threads) {
        const TrainConfig cfg = make_config(gamma, mu, weight_mode, retrain_epochs, decay,
                                            stop_threshold, threads);
        const std::vector<Hypervector> rows = to_hv_rows(encoded);
        const RankTable table = make_rank_table(ranks, std::move(task_names));
        const WeightTable weights = ranks_to_weights(table, cfg.mu, cfg.weight_mode);
        AssociativeMemory model = train(rows, weights, cfg);
        model.scheme = scheme_from_string(scheme);
        model.master_seed = master_seed;
        if (cfg.retrain_max_epochs > 0) retrain(model, rows, weights, cfg);
        return model;
      },
      py::arg("encoded"), py::arg("ranks"), py::arg("task_names") = std::vector<std::string>{},
      py::arg("scheme") = "record", py::arg("master_seed") = 0, py::arg("gamma") = 1.0,
      py::arg("mu") = 1.0, py::arg("weight_mode") = "semantic", py::arg("retrain_epochs") = 10,
      py::arg("decay") = 0.8, py::arg("stop_threshold") = 0.01, py::arg("threads") = 0,
      "Weighted-bundling training (with optional retraining) from an (N, D) "
      "encoding matrix and an (N, T) rank matrix.");

  m.def(
      "predict_similarities",
      [](const AssociativeMemory& model, const DArray& encoded, int threads) {
        return from_double_columns(
            predict_similarities(model, to_hv_rows(encoded), threads).sims);
      },
      py::arg("model"), py::arg("encoded"), py::arg("threads") = 0,
      "Cosine similarities as an (M, T) matrix.");

  m.def(
      "similarities_to_ranks",
      [](const DArray& sims, std::vector<std::string> task_names) {
        SimilarityTable table;
        if (sims.ndim() != 2) throw py::value_error("expected an (M, T) array");
        const auto m_count = static_cast<std::size_t>(sims.shape(0));
        const auto t_count = static_cast<std::size_t>(sims.shape(1));
        table.sims.assign(t_count, std::vector<double>(m_count));
        auto view = sims.unchecked<2>();
        for (std::size_t i = 0; i < m_count; ++i)
          for (std::size_t j = 0; j < t_count; ++j)
            table.sims[j][i] = view(static_cast<py::ssize_t>(i), static_cast<py::ssize_t>(j));
        table.task_names = task_names.empty() ? numbered_tasks(t_count) : std::move(task_names);
        return from_int_columns(similarities_to_ranks(table).ranks);
      },
      py::arg("sims"), py::arg("task_names") = std::vector<std::string>{},
      "Rank 0 goes to the highest similarity; ties break by row index.");

  // --- evaluation -------------------------------------------------------------
  m.def(
      "kendall_tau",
      [](const std::vector<int>& a, const std::vector<int>& b) { return kendall_tau(a, b); },
      py::arg("a"), py::arg("b"));
  m.def(
      "kendall_tau_bruteforce",
      [](const std::vector<int>& a, const std::vector<int>& b) {
        return kendall_tau_bruteforce(a, b);
      },
      py::arg("a"), py::arg("b"));
  m.def(
      "score",
      [](const IArray& pred, const IArray& truth, std::vector<std::string> task_names) {
        const RankTable p = make_rank_table(pred, task_names);
        const RankTable t = make_rank_table(truth, std::move(task_names));
        const TauReport report = score(p, t);
        return py::make_tuple(report.per_task, report.average);
      },
      py::arg("pred"), py::arg("truth"), py::arg("task_names") = std::vector<std::string>{},
      "Per-task Kendall tau and the task average.");

  // --- persistence -------------------------------------------------------------
  m.def("save_model", &save_model, py::arg("path"), py::arg("model"));
  m.def("load_model", &load_model, py::arg("path"));
}
