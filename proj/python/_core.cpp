#include "dchain/double_chain.hpp"
#include "dchain/error.hpp"
#include "dchain/extremal.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <chrono>

namespace py = pybind11;
using namespace dchain;

namespace {

py::object to_py(const BigInt& v) { return py::int_(py::str(to_string(v))); }

py::object to_py(const Rational& v) {
  static py::object fraction = py::module_::import("fractions").attr("Fraction");
  return fraction(py::str(to_string(v)));
}

Rational from_py_rational(const py::object& v) { return parse_rational(py::str(v).cast<std::string>()); }

std::vector<std::vector<unsigned>> family_to_lists(const Family& f) {
  std::vector<std::vector<unsigned>> out;
  for (Mask m : f.members()) {
    std::vector<unsigned> s;
    for (unsigned i = 0; i < f.ground_size(); ++i)
      if (m >> i & 1) s.push_back(i + 1);
    out.push_back(std::move(s));
  }
  return out;
}

Family family_from_lists(unsigned n, const std::vector<std::vector<unsigned>>& sets) {
  std::vector<Mask> masks;
  for (const auto& s : sets) {
    Mask m = 0;
    for (unsigned x : s) {
      if (x < 1 || x > n) throw Error("element " + std::to_string(x) + " outside [1," + std::to_string(n) + "]");
      m |= Mask{1} << (x - 1);
    }
    masks.push_back(m);
  }
  return Family(n, std::move(masks));
}

py::dict certificate_dict(const Certificate& c) {
  py::dict d;
  d["claim"] = c.claim;
  for (const auto& [k, v] : c.fields) d[py::str(k)] = v;
  d["verdict"] = std::string(verdict_string(c.verdict));
  d["witness"] = c.witness ? py::cast(family_to_lists(*c.witness)) : py::none();
  d["text"] = c.serialize();
  return d;
}

std::optional<std::chrono::milliseconds> seconds(std::optional<double> s) {
  if (!s || *s <= 0) return std::nullopt;
  return std::chrono::milliseconds(static_cast<long long>(*s * 1000));
}

Poset poset_of(const std::string& expr) { return eval_expr(parse_expr(expr)); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Double-chain toolkit for forbidden-subposet problems";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<Error>(m, "DchainError", PyExc_ValueError);

  py::class_<Poset>(m, "Poset")
      .def(py::init([](std::size_t size, const std::vector<std::pair<std::size_t, std::size_t>>& relations) {
             return Poset::from_relations(size, relations);
           }),
           py::arg("size"), py::arg("relations") = std::vector<std::pair<std::size_t, std::size_t>>{})
      .def_property_readonly("size", &Poset::size)
      .def("__len__", &Poset::size)
      .def("less", &Poset::less, py::arg("a"), py::arg("b"))
      .def("relations", &Poset::relations)
      .def("longest_chain", [](const Poset& p) { return longest_chain(p); })
      .def("b_value", [](const Poset& p) { return to_py(b_value(p)); })
      .def("dual", [](const Poset& p) { return dual(p); })
      .def("is_isomorphic", [](const Poset& a, const Poset& b) { return is_isomorphic(a, b); })
      .def("to_text", [](const Poset& p) { return format_poset_text(p); })
      .def("__eq__", [](const Poset& a, const Poset& b) { return a == b; })
      .def("__repr__", [](const Poset& p) {
        return "<Poset size=" + std::to_string(p.size()) + " relations=" + std::to_string(p.relation_count()) + ">";
      });

  m.def("poset", &poset_of, py::arg("expr"), "Evaluate a poset expression such as \"S' * D3 + B + B\".");
  m.def("base_poset", [](const std::string& name) { return base_poset(name); }, py::arg("name"));
  m.def("path_poset", &path_poset, py::arg("length"));
  m.def("normalize_expr", [](const std::string& e) { return to_string(parse_expr(e)); }, py::arg("expr"));

  m.def(
      "info",
      [](const std::string& text) {
        const PosetExpr e = parse_expr(text);
        const Poset p = eval_expr(e);
        py::dict d;
        d["expr"] = to_string(e);
        d["size"] = p.size();
        d["L"] = longest_chain(p);
        d["b"] = to_py(b_value(p));
        d["e"] = e.base_leaves_only() ? py::cast(e_composition_bound(e)) : py::none();
        return d;
      },
      py::arg("expr"));

  m.def("sigma", [](unsigned n, unsigned k) { return to_py(sigma(n, k)); }, py::arg("n"), py::arg("m"));
  m.def(
      "upper_bound",
      [](const std::string& expr, unsigned n) {
        const UpperBound ub = upper_bound_theorem4(poset_of(expr), n);
        return py::make_tuple(to_py(ub.value), std::string(bound_kind_string(ub.kind)));
      },
      py::arg("expr"), py::arg("n"));
  m.def("old_bound", [](const std::string& expr, unsigned n) { return to_py(old_bound(poset_of(expr), n)); },
        py::arg("expr"), py::arg("n"));

  m.def(
      "middle_levels",
      [](unsigned n, unsigned k) { return family_to_lists(middle_levels_family(n, k)); }, py::arg("n"), py::arg("m"));
  m.def(
      "is_p_free",
      [](unsigned n, const std::vector<std::vector<unsigned>>& family, const std::string& expr) {
        return is_p_free(family_from_lists(n, family), poset_of(expr));
      },
      py::arg("n"), py::arg("family"), py::arg("expr"));
  m.def(
      "embeds",
      [](const Poset& pattern, const Poset& host) { return embeds_weak(pattern, host); }, py::arg("pattern"),
      py::arg("host"), "Weak embedding of pattern into host, or None.");
  m.def(
      "double_lubell_sum",
      [](unsigned n, const std::vector<std::vector<unsigned>>& family) {
        return to_py(double_lubell_sum(family_from_lists(n, family)));
      },
      py::arg("n"), py::arg("family"));

  m.def(
      "la",
      [](unsigned n, const std::string& expr, std::uint64_t budget, std::optional<double> time_limit) {
        LaOptions opts;
        opts.max_n = std::max(opts.max_n, n);
        opts.max_nodes = budget;
        opts.time_limit = seconds(time_limit);
        LaResult r;
        {
          py::gil_scoped_release release;
          r = la_exact(n, poset_of(expr), opts);
        }
        py::dict d;
        d["exact"] = r.status == LaStatus::Exact;
        d["value"] = r.value;
        d["upper_bound"] = r.upper_bound;
        d["method"] = r.method;
        d["witness"] = family_to_lists(r.witness);
        return d;
      },
      py::arg("n"), py::arg("expr"), py::arg("budget") = 0, py::arg("time_limit") = py::none());

  m.def(
      "verify",
      [](const std::string& expr, unsigned n) {
        Certificate c;
        {
          py::gil_scoped_release release;
          c = verify_main_theorem(parse_expr(expr), n);
        }
        return certificate_dict(c);
      },
      py::arg("expr"), py::arg("n"));

  m.def(
      "window_check",
      [](const std::string& expr, std::optional<py::object> m_value, unsigned jobs, std::uint64_t budget,
         std::optional<double> time_limit) {
        const Poset p = poset_of(expr);
        const Rational mv = m_value ? from_py_rational(*m_value) : b_value(p);
        WindowOptions opts;
        opts.jobs = jobs;
        opts.max_nodes = budget;
        opts.time_limit = seconds(time_limit);
        Certificate c;
        {
          py::gil_scoped_release release;
          c = window_condition(p, mv, expr, opts);
        }
        return certificate_dict(c);
      },
      py::arg("expr"), py::arg("m") = py::none(), py::arg("jobs") = 1, py::arg("budget") = 0,
      py::arg("time_limit") = py::none());

  m.def(
      "e_scan",
      [](const std::string& expr, unsigned k, std::optional<unsigned> n_max, unsigned jobs) {
        Certificate c;
        {
          py::gil_scoped_release release;
          c = e_lower_scan(poset_of(expr), k, n_max.value_or(2 * k + 2), expr, jobs);
        }
        return certificate_dict(c);
      },
      py::arg("expr"), py::arg("m"), py::arg("n_max") = py::none(), py::arg("jobs") = 1);

  m.def(
      "audit_double_chains",
      [](unsigned n, unsigned jobs) {
        DoubleChainAudit a;
        {
          py::gil_scoped_release release;
          a = audit_double_chains(n, jobs);
        }
        py::dict d;
        d["n"] = a.n;
        d["subsets"] = a.subsets;
        d["matches"] = a.matches;
        d["passed"] = a.passed();
        return d;
      },
      py::arg("n"), py::arg("jobs") = 1);
}
