// SPDX-License-Identifier: Apache-2.0
#include "unioffload/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "unioffload/bundled.hpp"
#include "unioffload/conformance.hpp"
#include "unioffload/parser.hpp"
#include "unioffload/rewriter.hpp"

namespace unioffload::cli {

namespace fs = std::filesystem;

namespace {

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return std::nullopt;
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Writes through a temporary sibling and renames it into place.
bool write_atomic(const fs::path& path, const std::string& text, std::string& error) {
  fs::path tmp = path;
  tmp += ".unioffload-tmp-" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f || !(f << text) || !f.flush()) {
      error = "cannot write " + tmp.string();
      return false;
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    error = "cannot rename into " + path.string();
    return false;
  }
  return true;
}

std::string describe(const Lowering& l) {
  std::string s;
  switch (l.kind) {
    case Lowering::Kind::Drop:
      return "drop";
    case Lowering::Kind::Delegate:
      s = "=> " + l.target;
      break;
    case Lowering::Kind::Lines:
      for (const auto& line : l.lines) {
        if (!s.empty()) s += " | ";
        if (line.role == LineRole::Launch) s += "launch: ";
        if (line.role == LineRole::Loop) s += "loop: ";
        for (std::size_t i = 0; i < line.primitives.size(); ++i) s += (i ? " " : "") + line.primitives[i];
      }
      break;
  }
  for (const auto& c : l.implicit) s += " +" + c;
  return s;
}

std::string_view arity_name(DirectiveArity a) { return a == DirectiveArity::NoArgs ? "noargs" : "varargs"; }

std::string render_cell(const ClauseTemplate& t) { return t.absent ? "-" : t.text; }

void dump_tsv(const Registry& reg, std::ostream& out) {
  out << "record\tname\tnotation\tkind\tarity";
  for (Backend b : kAllBackends) out << '\t' << to_string(b);
  out << '\n';
  for (const auto& d : reg.directives()) {
    out << "directive\t" << d.name << '\t' << to_string(d.notation) << '\t' << d.kind << '\t'
        << arity_name(d.arity);
    for (Backend b : kAllBackends) out << '\t' << describe(reg.lowering(d.kind, b));
    out << '\n';
  }
  for (const auto& c : reg.clauses())
    out << "clause\t" << c.name << '\t' << to_string(c.notation) << '\t' << c.kind << '\t' << to_string(c.arity)
        << '\n';
  for (const auto& k : reg.clause_kinds()) {
    for (auto ctx : {RenderContext::Acc, RenderContext::Omp, RenderContext::Fallback})
      out << "render\t" << k.id << '\t' << to_string(ctx) << '\t' << render_cell(k.in(ctx)) << '\n';
    if (k.split) out << "split\t" << k.id << '\t' << (*k.split == LineRole::Launch ? "launch" : "loop") << '\n';
  }
  for (const auto& [key, yes] : reg.applicability())
    out << "applic\t" << key.first << '\t' << key.second << '\t' << (yes ? "yes" : "no") << '\n';
}

void dump_json(const Registry& reg, std::ostream& out) {
  using nlohmann::json;
  json j;
  j["directives"] = json::array();
  for (const auto& d : reg.directives()) {
    json lowering;
    for (Backend b : kAllBackends) lowering[std::string(to_string(b))] = describe(reg.lowering(d.kind, b));
    j["directives"].push_back({{"name", d.name},
                               {"notation", to_string(d.notation)},
                               {"kind", d.kind},
                               {"arity", arity_name(d.arity)},
                               {"lowering", lowering}});
  }
  j["clauses"] = json::array();
  for (const auto& c : reg.clauses())
    j["clauses"].push_back(
        {{"name", c.name}, {"notation", to_string(c.notation)}, {"kind", c.kind}, {"arity", to_string(c.arity)}});
  j["clause_kinds"] = json::array();
  for (const auto& k : reg.clause_kinds()) {
    json render;
    for (auto ctx : {RenderContext::Acc, RenderContext::Omp, RenderContext::Fallback})
      render[std::string(to_string(ctx))] = render_cell(k.in(ctx));
    json entry = {{"id", k.id}, {"render", render}};
    if (k.split) entry["split"] = *k.split == LineRole::Launch ? "launch" : "loop";
    j["clause_kinds"].push_back(entry);
  }
  j["applicability"] = json::array();
  for (const auto& [key, yes] : reg.applicability())
    j["applicability"].push_back({{"primitive", key.first}, {"clause", key.second}, {"applicable", yes}});
  out << j.dump(2) << '\n';
}

int explain(const Registry& reg, const std::string& text, std::ostream& out, std::ostream& err, bool color) {
  std::vector<SourceSegment> segs;
  try {
    segs = scan(text, reg);
  } catch (const Error& e) {
    err << format_diagnostic({Level::Error, e.location().value_or(SourceLocation{}), e.what()}, "<explain>", color)
        << '\n';
    return 1;
  }
  const DirectiveInvocation* inv = nullptr;
  std::size_t count = 0;
  for (const auto& s : segs)
    if (s.invocation) {
      inv = &*s.invocation;
      ++count;
    }
  if (count != 1) {
    err << "<explain>: error: expected exactly one registered directive invocation\n";
    return 1;
  }
  out << inv->alias->name << " -> " << inv->alias->kind << " (" << to_string(inv->alias->notation) << ")\n";
  for (Backend b : kAllBackends) {
    out << to_string(b) << ":\n";
    try {
      auto plan = lower(*inv, b, reg);
      if (plan.pragmas.empty()) out << "  (no pragma)\n";
      for (const auto& p : plan.pragmas) out << "  " << render_line(p, PragmaStyle::Hash) << '\n';
      for (const auto& d : plan.dropped)
        out << "  dropped: " << (d.implicit ? d.kind + " (implicit)" : d.source) << ": " << d.reason << '\n';
      for (const auto& w : plan.warnings) out << "  warning: " << w.message << '\n';
    } catch (const Error& e) {
      out << "  error: " << e.what() << '\n';
      return 1;
    }
  }
  return 0;
}

struct Job {
  std::string input;  // path or "-"
  std::string display;
  std::optional<fs::path> output;
  bool read_ok = true;
  TranspileResult result;
  std::string write_error;
};

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err, std::istream& in, bool color) {
  CLI::App app{"Lowers unified offloading directives to OpenACC or OpenMP pragmas", "unioffload"};
  app.require_subcommand(1);
  std::string registry_file;
  app.add_option("--registry", registry_file, "Registry data file (default: bundled)");

  auto* tr = app.add_subcommand("transpile", "Rewrite source files");
  std::string backend_name, style = "hash", passthrough = "off", output;
  bool acc = false, acc_parallel = false, omp_target = false, omp_distribute = false, keep_comment = false;
  std::vector<std::string> files;
  tr->add_option("--backend", backend_name, "Target backend")
      ->check(CLI::IsMember({"acc-kernels", "acc-parallel", "omp-loop", "omp-distribute", "fallback"}));
  tr->add_flag("--acc", acc, "OpenACC backend (kernels unless --acc-parallel)");
  tr->add_flag("--acc-parallel", acc_parallel, "Use parallel as the OpenACC launch construct");
  tr->add_flag("--omp-target", omp_target, "OpenMP target backend (loop unless --omp-distribute)");
  tr->add_flag("--omp-distribute", omp_distribute, "Use distribute as the OpenMP target construct");
  tr->add_option("--style", style, "Pragma style")->check(CLI::IsMember({"hash", "underscore"}));
  tr->add_option("--passthrough-unknown", passthrough, "Attach unknown arguments verbatim")
      ->check(CLI::IsMember({"launch", "loop", "off"}));
  tr->add_flag("--keep-directive-comment", keep_comment, "Add a comment naming the original invocation");
  tr->add_option("-o,--output", output, "Output file, or directory for several inputs");
  tr->add_option("files", files, "Input files ('-' for stdin)");

  auto* ex = app.add_subcommand("explain", "Show the lowering of one invocation on every backend");
  std::string directive;
  ex->add_option("directive", directive, "Invocation text, e.g. \"OFFLOAD(COLLAPSE(2))\"")->required();

  auto* dump = app.add_subcommand("dump-table", "Export the loaded registry");
  std::string format = "tsv";
  dump->add_option("--format", format, "Output format")->check(CLI::IsMember({"tsv", "json"}));

  auto* vt = app.add_subcommand("verify-tables", "Check lowering against a row file");
  std::string row_file;
  vt->add_option("rowfile", row_file, "Row file (default: bundled)");

  std::vector<const char*> cargv;
  for (const auto& a : argv) cargv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  std::optional<Registry> custom;
  if (!registry_file.empty()) {
    auto text = read_file(registry_file);
    if (!text) {
      err << registry_file << ": error: cannot read registry file\n";
      return 1;
    }
    try {
      custom = Registry::load(*text);
    } catch (const Error& e) {
      err << format_diagnostic({Level::Error, e.location().value_or(SourceLocation{}), e.what()}, registry_file,
                               color)
          << '\n';
      return 1;
    }
  }
  const Registry& reg = custom ? *custom : Registry::bundled();

  if (*ex) return explain(reg, directive, out, err, color);

  if (*dump) {
    if (format == "json")
      dump_json(reg, out);
    else
      dump_tsv(reg, out);
    return 0;
  }

  if (*vt) {
    std::string text;
    if (row_file.empty()) {
      text = std::string(bundled_rows_text());
    } else if (auto t = read_file(row_file)) {
      text = *t;
    } else {
      err << row_file << ": error: cannot read row file\n";
      return 1;
    }
    try {
      auto rows = load_rows(text);
      auto report = verify_all(rows, reg);
      out << report.format();
      return report.ok() ? 0 : 1;
    } catch (const Error& e) {
      err << (row_file.empty() ? "<bundled rows>" : row_file) << ": error: " << e.what() << '\n';
      return 1;
    }
  }

  // transpile
  auto warn = [&](const std::string& msg) {
    err << "unioffload: " << (color ? "\x1b[1;35mwarning\x1b[0m" : "warning") << ": " << msg << '\n';
  };
  TranspileConfig config;
  if (acc) {
    config.backend = acc_parallel ? Backend::AccParallel : Backend::AccKernels;
    if (omp_target) warn("both --acc and --omp-target given; using OpenACC");
  } else if (omp_target) {
    config.backend = omp_distribute ? Backend::OmpDistribute : Backend::OmpLoop;
  } else {
    config.backend = Backend::Fallback;
  }
  if (acc_parallel && !acc && backend_name.empty()) warn("--acc-parallel has no effect without --acc");
  if (omp_distribute && !omp_target && backend_name.empty())
    warn("--omp-distribute has no effect without --omp-target");
  if (!backend_name.empty()) {
    if (acc || acc_parallel || omp_target || omp_distribute) warn("--backend overrides --acc/--omp-target flags");
    config.backend = *parse_backend(backend_name);
  }
  config.style = style == "underscore" ? PragmaStyle::Underscore : PragmaStyle::Hash;
  config.passthrough = passthrough == "launch" ? Passthrough::Launch
                       : passthrough == "loop" ? Passthrough::Loop
                                               : Passthrough::Off;
  config.keep_directive_comment = keep_comment;

  if (files.empty()) files.push_back("-");
  if (std::count(files.begin(), files.end(), "-") > 1) {
    err << "unioffload: error: stdin ('-') given more than once\n";
    return 2;
  }

  std::vector<Job> jobs(files.size());
  for (std::size_t i = 0; i < files.size(); ++i) {
    jobs[i].input = files[i];
    jobs[i].display = files[i] == "-" ? "<stdin>" : files[i];
    if (output.empty() || output == "-") continue;
    if (files.size() == 1) {
      jobs[i].output = fs::path(output);
    } else {
      std::string base = files[i] == "-" ? "stdin" : fs::path(files[i]).filename().string();
      jobs[i].output = fs::path(output) / base;
    }
  }
  if (files.size() > 1 && !output.empty() && output != "-") {
    std::error_code ec;
    fs::create_directories(output, ec);
    if (!fs::is_directory(output)) {
      err << output << ": error: not a directory\n";
      return 1;
    }
  }

  std::string stdin_text;
  if (std::find(files.begin(), files.end(), "-") != files.end()) {
    std::ostringstream ss;
    ss << in.rdbuf();
    stdin_text = ss.str();
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < jobs.size();) {
      Job& job = jobs[i];
      std::optional<std::string> text = job.input == "-" ? std::optional(stdin_text) : read_file(job.input);
      if (!text) {
        job.read_ok = false;
        continue;
      }
      job.result = transpile(*text, config, reg);
      if (job.result.ok && job.output) write_atomic(*job.output, job.result.output, job.write_error);
    }
  };
  std::size_t nthreads = std::min<std::size_t>(jobs.size(), std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int status = 0;
  for (const auto& job : jobs) {
    if (!job.read_ok) {
      err << job.display << ": error: cannot read file\n";
      status = 1;
      continue;
    }
    for (const auto& d : job.result.diagnostics) err << format_diagnostic(d, job.display, color) << '\n';
    if (!job.result.ok) {
      status = 1;
      continue;
    }
    if (!job.write_error.empty()) {
      err << job.display << ": error: " << job.write_error << '\n';
      status = 1;
      continue;
    }
    if (!job.output) out << job.result.output;
  }
  out.flush();
  return status;
}

}  // namespace unioffload::cli
