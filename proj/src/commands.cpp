#include "diffalg/commands.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "diffalg/text.hpp"

namespace diffalg {

namespace {

using nlohmann::json;

const std::vector<std::string> kCommands{"normalize", "comm",  "apply", "compose",      "mdeg",
                                         "order",     "reduce", "weyl-decompose", "decompose", "reconstruct",
                                         "zeta",      "eta",   "azumaya-check", "zfilt"};

void require_args(const Request& req, std::size_t count) {
  if (req.args.size() != count)
    throw Error(ErrorKind::validation, req.command + " takes " + std::to_string(count) + " argument" +
                                           (count == 1 ? "" : "s") + ", got " + std::to_string(req.args.size()));
}

bool structured(const Request& req) { return req.format == "structured"; }

std::vector<std::string> split_vars(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw Error(ErrorKind::validation, "empty variable name in --vars");
    if (item == "d") throw Error(ErrorKind::validation, "'d' is reserved for partials");
    for (std::size_t i = 0; i < item.size(); ++i) {
      const unsigned char c = static_cast<unsigned char>(item[i]);
      if (!(std::isalpha(c) || c == '_' || (i > 0 && std::isdigit(c))))
        throw Error(ErrorKind::validation, "invalid variable name '" + item + "'");
    }
    out.push_back(item);
  }
  return out;
}

Field field_of(const Request& req) { return Field::of_characteristic(req.characteristic); }

HContext context_of(const Request& req) {
  Mode mode;
  if (req.mode == "heisenberg") mode = Mode::heisenberg;
  else if (req.mode == "weyl") mode = Mode::weyl;
  else throw Error(ErrorKind::validation, "unknown mode '" + req.mode + "'");
  return HContext(req.n, field_of(req), mode);
}

PolyRing ring_of(const Request& req) { return PolyRing(split_vars(req.vars), field_of(req)); }

std::string show(const DOperator& d, bool as_structured) {
  if (auto a = as_element(d)) return as_structured ? to_structured(*a) : to_text(*a) + "\n";
  return as_structured ? to_structured(d) : to_text(d) + "\n";
}

std::string show(const PDOp& d, bool as_structured) {
  if (auto p = as_poly(d)) return as_structured ? to_structured(*p) : to_text(*p) + "\n";
  return as_structured ? to_structured(d) : to_text(d) + "\n";
}

std::string show_matrix(const std::vector<std::vector<PDOp>>& m, const char* type, bool as_structured) {
  if (!as_structured) return matrix_to_text(m) + "\n";
  std::string out = json{{"type", type}, {"size", m.size()}}.dump() + "\n";
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j)
      if (!m[i][j].is_zero()) out += json{{"i", i}, {"j", j}, {"op", to_text(m[i][j])}}.dump() + "\n";
  return out;
}

std::string show_value(const char* type, const std::string& value, bool as_structured) {
  if (!as_structured) return value + "\n";
  return json{{"type", type}, {"value", value}}.dump() + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::validation, "cannot read algebra file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int spec_size(const std::string& spec, std::size_t colon) {
  const std::string tail = spec.substr(colon + 1);
  if (tail.empty() || tail.size() > 3 || tail.find_first_not_of("0123456789") != std::string::npos)
    throw Error(ErrorKind::validation, "bad size in algebra spec '" + spec + "'");
  return std::stoi(tail);
}

std::string run_binary(const Request& req, bool commutator, bool apply_mode) {
  require_args(req, 2);
  const bool st = structured(req);
  if (!req.vars.empty()) {
    const PolyRing ring = ring_of(req);
    const PDOp a = parse_pdop(req.args[0], ring);
    if (apply_mode) {
      const Poly f = parse_poly(req.args[1], ring);
      const Poly r = p_apply(a, f);
      return st ? to_structured(r) : to_text(r) + "\n";
    }
    const PDOp b = parse_pdop(req.args[1], ring);
    return show(commutator ? p_commutator(a, b) : p_compose(a, b), st);
  }
  const HContext ctx = context_of(req);
  const DOperator a = parse_operator(req.args[0], ctx);
  if (apply_mode) {
    const HElement r = apply(a, parse_element(req.args[1], ctx));
    return st ? to_structured(r) : to_text(r) + "\n";
  }
  const DOperator b = parse_operator(req.args[1], ctx);
  return show(commutator ? op_commutator(a, b) : compose(a, b), st);
}

std::string run_reduce(const Request& req) {
  require_args(req, 1);
  const HContext ctx = context_of(req);
  const DOperator d = parse_operator(req.args[0], ctx);
  const ReductionWitness w = reduce_to_scalar(d);
  std::vector<std::string> partners;
  for (const auto& p : w.partners) {
    if (const auto* g = std::get_if<Generator>(&p)) partners.push_back(g->name());
    else partners.push_back(to_text(std::get<DOperator>(p)));
  }
  if (structured(req))
    return json{{"type", "ReductionWitness"},
                {"partners", partners},
                {"scalar", w.scalar.to_string()},
                {"schedule", w.used_symbol_schedule ? "symbol" : "phase"}}
               .dump() +
           "\n";
  std::string list;
  for (std::size_t i = 0; i < partners.size(); ++i) list += (i ? ", " : "") + partners[i];
  return "witness: [" + list + "]\nscalar: " + w.scalar.to_string() + "\n";
}

std::string run_weyl_decompose(const Request& req) {
  require_args(req, 1);
  const HContext ctx = context_of(req);
  const auto pairs = weyl_d0_decompose(parse_operator(req.args[0], ctx));
  std::string out;
  if (structured(req)) {
    out = json{{"type", "LambdaRho"}, {"pairs", pairs.size()}}.dump() + "\n";
    for (const auto& [a, b] : pairs) out += json{{"left", to_text(a)}, {"right", to_text(b)}}.dump() + "\n";
    return out;
  }
  if (pairs.empty()) return "0\n";
  for (const auto& [a, b] : pairs) out += "(" + to_text(a) + ", " + to_text(b) + ")\n";
  return out;
}

std::string run_order(const Request& req) {
  require_args(req, 1);
  if (!req.algebra.empty()) {
    const CenteredFreeAlgebra a = free_algebra_from_spec(req.algebra, req);
    const OperatorMatrix m(parse_pdop_matrix(req.args[0], a.ring()));
    if (m.size() != a.dim()) throw Error(ErrorKind::validation, "matrix size differs from the algebra rank");
    if (req.check) return show_value("bool", order_check(m, *req.check) ? "true" : "false", structured(req));
    int best = kDegreeOfZero;
    for (const auto& row : m.entries())
      for (const auto& e : row) best = std::max(best, p_order(e));
    return show_value("order", degree_text(best), structured(req));
  }
  if (req.vars.empty()) throw Error(ErrorKind::validation, "order needs --vars or --algebra");
  const PDOp d = parse_pdop(req.args[0], ring_of(req));
  if (req.check)
    return show_value("bool", grothendieck_order_check(d, *req.check) ? "true" : "false", structured(req));
  return show_value("order", degree_text(p_order(d)), structured(req));
}

std::string run_algebra_command(const Request& req) {
  if (req.algebra.empty()) throw Error(ErrorKind::validation, req.command + " needs --algebra");
  const CenteredFreeAlgebra a = free_algebra_from_spec(req.algebra, req);
  const bool st = structured(req);
  auto matrix_arg = [&](const std::string& text) {
    OperatorMatrix m(parse_pdop_matrix(text, a.ring()));
    if (m.size() != a.dim()) throw Error(ErrorKind::validation, "matrix size differs from the algebra rank");
    return m;
  };
  if (req.command == "decompose") {
    require_args(req, 1);
    return show_matrix(decompose(matrix_arg(req.args[0]), a), "Components", st);
  }
  if (req.command == "reconstruct") {
    require_args(req, 1);
    const auto comps = parse_pdop_matrix(req.args[0], a.ring());
    return show_matrix(reconstruct(comps, a).entries(), "OperatorMatrix", st);
  }
  if (req.command == "zeta") {
    require_args(req, 1);
    return show(zeta_elem(matrix_arg(req.args[0]), a), st);
  }
  if (req.command == "eta") {
    if (req.args.empty()) throw Error(ErrorKind::validation, "eta takes at least one generator");
    std::vector<PDOp> gens;
    for (const auto& s : req.args) gens.push_back(parse_pdop(s, a.ring()));
    std::string out;
    for (const auto& m : eta_gens(gens, a)) out += show_matrix(m.entries(), "OperatorMatrix", st);
    return out;
  }
  require_args(req, 0);
  const AzumayaReport r = azumaya_check(a);
  if (st)
    return json{{"type", "AzumayaReport"}, {"determinant", to_text(r.determinant)}, {"azumaya", r.azumaya}}.dump() +
           "\n";
  return "det: " + to_text(r.determinant) + "\nazumaya: " + (r.azumaya ? "true" : "false") + "\n";
}

std::string run_zfilt(const Request& req) {
  require_args(req, 0);
  if (req.algebra.empty()) throw Error(ErrorKind::validation, "zfilt needs --algebra");
  const FinAlgebra a = fin_algebra_from_spec(req.algebra, field_of(req));
  const int cap = req.imax >= 0 ? req.imax : static_cast<int>(a.dim() * a.dim());
  const FiltrationReport r = req.relative ? relative_z_filtration(a, algebra_centre(a), cap) : z_filtration(a, cap);
  if (structured(req)) {
    std::string out = json{{"type", "FiltrationReport"},
                           {"dim", a.dim()},
                           {"relative", req.relative},
                           {"stabilized_at", r.stabilized_at ? json(*r.stabilized_at) : json(nullptr)}}
                          .dump() +
                      "\n";
    for (const auto& l : r.levels) out += json{{"index", l.index}, {"dim", l.space.dim()}}.dump() + "\n";
    return out;
  }
  std::string out;
  for (const auto& l : r.levels) out += "Z" + std::to_string(l.index) + ": " + std::to_string(l.space.dim()) + "\n";
  out += "stabilized: " + (r.stabilized_at ? std::to_string(*r.stabilized_at) : std::string("no")) + "\n";
  return out;
}

}  // namespace

CenteredFreeAlgebra free_algebra_from_spec(const std::string& spec, const Request& req) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  if (head == "matrix" && colon != std::string::npos) {
    Request r = req;
    if (r.vars.empty()) r.vars = "t";
    return build_matrix_algebra(spec_size(spec, colon), ring_of(r));
  }
  if ((head == "heisenberg" || head == "weyl") && colon != std::string::npos) {
    if (req.characteristic == 0)
      throw Error(ErrorKind::unsupported_characteristic, "H_n is free over its centre only in characteristic p");
    return build_heisenberg_charp(spec_size(spec, colon), static_cast<std::uint32_t>(req.characteristic),
                                  head == "weyl" ? Mode::weyl : Mode::heisenberg);
  }
  if (spec == "dual") {
    Request r = req;
    if (r.vars.empty()) r.vars = "t";
    return build_dual_numbers(ring_of(r));
  }
  return load_free_algebra_json(read_file(spec));
}

FinAlgebra fin_algebra_from_spec(const std::string& spec, Field f) {
  auto builtin = [&](const std::string& part) -> std::optional<FinAlgebra> {
    if (part == "field") return truncated_polynomial(1, f);
    const auto colon = part.find(':');
    if (colon == std::string::npos) return std::nullopt;
    const std::string head = part.substr(0, colon);
    if (head == "truncated") return truncated_polynomial(spec_size(part, colon), f);
    if (head == "matrix") return matrix_algebra(spec_size(part, colon), f);
    return std::nullopt;
  };
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string part; std::getline(ss, part, '/');) parts.push_back(part);
  std::optional<FinAlgebra> acc;
  for (const auto& part : parts) {
    auto factor = builtin(part);
    if (!factor) return load_fin_algebra_json(read_file(spec));
    acc = acc ? tensor_product(*acc, *factor) : std::move(*factor);
  }
  if (!acc) throw Error(ErrorKind::validation, "empty algebra spec");
  return std::move(*acc);
}

std::string run_command(const Request& req) {
  if (std::find(kCommands.begin(), kCommands.end(), req.command) == kCommands.end())
    throw Error(ErrorKind::validation, "unknown command '" + req.command + "'");
  if (req.format != "text" && req.format != "structured")
    throw Error(ErrorKind::validation, "unknown format '" + req.format + "'");
  const bool st = structured(req);
  const std::string& c = req.command;
  if (c == "normalize") {
    require_args(req, 1);
    if (!req.vars.empty()) return show(parse_pdop(req.args[0], ring_of(req)), st);
    return show(parse_operator(req.args[0], context_of(req)), st);
  }
  if (c == "comm") return run_binary(req, true, false);
  if (c == "compose") return run_binary(req, false, false);
  if (c == "apply") return run_binary(req, false, true);
  if (c == "mdeg") {
    require_args(req, 1);
    return show_value("mdeg", degree_text(mdeg(parse_operator(req.args[0], context_of(req)))), st);
  }
  if (c == "order") return run_order(req);
  if (c == "reduce") return run_reduce(req);
  if (c == "weyl-decompose") return run_weyl_decompose(req);
  if (c == "zfilt") return run_zfilt(req);
  return run_algebra_command(req);
}

int exit_code_for(const Error& e) { return e.is_precondition() ? 2 : 1; }

}  // namespace diffalg
