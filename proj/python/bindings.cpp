#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "diaglab/analysis.hpp"
#include "diaglab/codec.hpp"
#include "diaglab/diagonal.hpp"
#include "diaglab/enumerate.hpp"
#include "diaglab/error.hpp"
#include "diaglab/parse.hpp"
#include "diaglab/perm.hpp"

namespace py = pybind11;
using namespace diaglab;

namespace {

EnumTerm builder_by_name(const std::string& name, uint64_t salt,
                         const std::vector<std::vector<uint8_t>>& matrix) {
    auto b = builder_from_string(name);
    if (!b) throw DomainError("unknown builder: " + name);
    return build_enumeration({*b, salt, matrix});
}

DiagVariant variant_by_name(const std::string& v) {
    if (v == "row") return DiagVariant::Row;
    if (v == "transversal") return DiagVariant::Transversal;
    throw DomainError("variant must be 'row' or 'transversal'");
}

py::int_ code_to_py(const GodelCode& c) { return py::int_(py::str(c.str())); }

py::dict witness_to_dict(const Witness& w) {
    py::dict d;
    d["row"] = w.row;
    d["kind"] = witness_kind_name(w.kind);
    d["position"] = w.position ? py::object(py::int_(*w.position))
                               : py::object(py::none());
    d["horizon"] = w.horizon;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Executable diagonalization over countable enumerations of "
              "infinite binary sequences";

    static py::exception<Error> exc_error(m, "Error", PyExc_RuntimeError);
    static py::exception<ParseError> exc_parse(m, "ParseError",
                                               exc_error.ptr());
    static py::exception<DomainError> exc_domain(m, "DomainError",
                                                 exc_error.ptr());
    static py::exception<InvalidCodeError> exc_code(m, "InvalidCodeError",
                                                    exc_error.ptr());
    static py::exception<NotEventuallyPeriodicError> exc_ep(
        m, "NotEventuallyPeriodicError", exc_error.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ParseError& e) {
            py::set_error(exc_parse, e.what());
        } catch (const InvalidCodeError& e) {
            py::set_error(exc_code, e.what());
        } catch (const NotEventuallyPeriodicError& e) {
            py::set_error(exc_ep, e.what());
        } catch (const DomainError& e) {
            py::set_error(exc_domain, e.what());
        } catch (const Error& e) {
            py::set_error(exc_error, e.what());
        }
    });

    py::class_<SeqTerm>(m, "SeqTerm")
        .def("__call__", &eval_seq, py::arg("i"))
        .def("prefix",
             [](const SeqTerm& s, uint64_t n) {
                 std::vector<int> out(n);
                 for (uint64_t i = 0; i < n; ++i) out[i] = eval_seq(s, i);
                 return out;
             },
             py::arg("n"))
        .def("__str__", [](const SeqTerm& s) { return print_term(s); })
        .def("__repr__",
             [](const SeqTerm& s) { return "seq: " + print_term(s); })
        .def("__eq__", [](const SeqTerm& a, const SeqTerm& b) { return a == b; },
             py::is_operator());

    py::class_<EnumTerm>(m, "EnumTerm")
        .def("__call__", &eval_enum, py::arg("k"), py::arg("i"))
        .def("row", &row, py::arg("k"))
        .def("matrix",
             [](const EnumTerm& e, uint64_t rows, uint64_t cols) {
                 std::vector<std::vector<int>> out(rows,
                                                   std::vector<int>(cols));
                 for (uint64_t k = 0; k < rows; ++k)
                     for (uint64_t i = 0; i < cols; ++i)
                         out[k][i] = eval_enum(e, k, i);
                 return out;
             },
             py::arg("rows"), py::arg("cols"))
        .def("__str__", [](const EnumTerm& e) { return print_term(e); })
        .def("__repr__",
             [](const EnumTerm& e) { return "enum: " + print_term(e); })
        .def("__eq__",
             [](const EnumTerm& a, const EnumTerm& b) { return a == b; },
             py::is_operator());

    py::class_<FamilyTerm>(m, "FamilyTerm")
        .def("__str__", [](const FamilyTerm& f) { return print_term(f); });

    m.def("parse_seq", &parse_seq, py::arg("text"));
    m.def("parse_enum", &parse_enum, py::arg("text"));
    m.def("parse_family", &parse_family, py::arg("text"));

    py::class_<FiniteSupportPerm>(m, "Perm")
        .def(py::init<>())
        .def(py::init<std::vector<uint32_t>>(), py::arg("table"))
        .def("__call__", &FiniteSupportPerm::apply, py::arg("i"))
        .def("inverse_apply", &FiniteSupportPerm::apply_inverse, py::arg("i"))
        .def_property_readonly("bound", &FiniteSupportPerm::bound)
        .def_property_readonly("table", &FiniteSupportPerm::table)
        .def("is_identity", &FiniteSupportPerm::is_identity)
        .def("__eq__",
             [](const FiniteSupportPerm& a, const FiniteSupportPerm& b) {
                 return a == b;
             },
             py::is_operator())
        .def("__str__", &print_perm)
        .def("__repr__", [](const FiniteSupportPerm& p) {
            return "Perm(" + print_perm(p) + ")";
        });
    m.def("transposition", &transposition, py::arg("a"), py::arg("b"));
    m.def("compose_perm", &compose_perm, py::arg("p"), py::arg("q"));
    m.def("invert_perm", &invert_perm, py::arg("p"));
    m.def("unrank_perm", &unrank_perm, py::arg("n"));
    m.def("rank_perm", &rank_perm, py::arg("p"));
    m.def("parse_perm", &parse_perm, py::arg("text"));

    m.def("pair_index", &pair_index, py::arg("a"), py::arg("b"));
    m.def("unpair_index", &unpair_index, py::arg("n"));
    m.def("interleave", &interleave, py::arg("e1"), py::arg("e2"));
    m.def("prepend", &prepend, py::arg("s"), py::arg("e"));
    m.def("dovetail", &dovetail, py::arg("family"));
    m.def("builder", &builder_by_name, py::arg("name"), py::arg("salt") = 0,
          py::arg("matrix") = std::vector<std::vector<uint8_t>>{});

    m.def("diag_classical", &diag_classical, py::arg("e"));
    m.def("diag_perm_row", &diag_perm_row, py::arg("e"), py::arg("p"));
    m.def("diag_perm_transversal", &diag_perm_transversal, py::arg("e"),
          py::arg("p"));
    m.def("build_y",
          [](const EnumTerm& e, const std::string& variant) {
              return build_y(e, variant_by_name(variant));
          },
          py::arg("e"), py::arg("variant") = "row");
    m.def("z_direct", &z_direct, py::arg("e"));

    py::class_<TowerLevel>(m, "TowerLevel")
        .def_readonly("n", &TowerLevel::n)
        .def_readonly("x_n", &TowerLevel::x_n)
        .def_readonly("w_n", &TowerLevel::w_n);
    m.def("tower", &tower, py::arg("x"), py::arg("y"), py::arg("n"));
    m.def("x_infinity", &x_infinity, py::arg("x"), py::arg("y"));

    m.def("encode_term",
          [](const py::object& t) {
              if (py::isinstance<SeqTerm>(t))
                  return code_to_py(encode_term(t.cast<SeqTerm>()));
              return code_to_py(encode_term(t.cast<EnumTerm>()));
          },
          py::arg("term"));
    m.def("decode_term",
          [](const py::int_& code) -> py::object {
              GodelCode c(py::str(code).cast<std::string>());
              DecodedTerm t = decode_term(c);
              if (std::holds_alternative<SeqTerm>(t))
                  return py::cast(std::get<SeqTerm>(t));
              return py::cast(std::get<EnumTerm>(t));
          },
          py::arg("code"));

    py::class_<EventuallyPeriodic>(m, "EventuallyPeriodic")
        .def_readonly("pre", &EventuallyPeriodic::pre)
        .def_readonly("per", &EventuallyPeriodic::per)
        .def("at", &EventuallyPeriodic::at, py::arg("i"))
        .def("__eq__",
             [](const EventuallyPeriodic& a, const EventuallyPeriodic& b) {
                 return a == b;
             },
             py::is_operator());
    m.def("ep_of_term", &ep_of_term, py::arg("s"));
    m.def("try_ep_of_term", &try_ep_of_term, py::arg("s"));
    m.def("ep_equal", &ep_equal, py::arg("a"), py::arg("b"));
    m.def("find_disagreement", &find_disagreement, py::arg("s"), py::arg("t"),
          py::arg("horizon"));
    m.def("verify_escape",
          [](const EnumTerm& e, const SeqTerm& y, uint64_t rows,
             uint64_t horizon) {
              py::list out;
              for (const Witness& w : verify_escape(e, y, rows, horizon))
                  out.append(witness_to_dict(w));
              return out;
          },
          py::arg("e"), py::arg("y"), py::arg("rows") = 64,
          py::arg("horizon") = 256);
    m.def("membership_scan",
          [](const SeqTerm& s, const EnumTerm& e, uint64_t rows,
             uint64_t horizon) {
              py::list out;
              for (const Witness& w : membership_scan(s, e, rows, horizon))
                  out.append(witness_to_dict(w));
              return out;
          },
          py::arg("s"), py::arg("e"), py::arg("rows") = 64,
          py::arg("horizon") = 256);
}
