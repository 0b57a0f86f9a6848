// agdec: encode and list-decode AG codes from the command line.
#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "agdec/codectl.hpp"

using namespace agdec;
using namespace agdec::codectl;
using json = nlohmann::json;

namespace {

std::vector<std::vector<u32>> read_rows(const std::string& path, std::size_t width, const std::string& what) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open " + path);
  std::vector<std::vector<u32>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    auto h = line.find('#');
    if (h != std::string::npos) line = line.substr(0, h);
    std::istringstream in(line);
    std::vector<u32> row;
    std::string tok;
    while (in >> tok) {
      std::size_t pos = 0;
      unsigned long v = 0;
      try {
        v = std::stoul(tok, &pos);
      } catch (...) {
        pos = 0;
      }
      if (pos != tok.size()) throw InputError(path + ":" + std::to_string(lineno) + ": bad symbol '" + tok + "'");
      row.push_back(static_cast<u32>(v));
    }
    if (row.empty()) continue;
    if (row.size() != width)
      throw InputError(path + ":" + std::to_string(lineno) + ": " + what + " has " + std::to_string(row.size()) +
                       " symbols, expected " + std::to_string(width));
    rows.push_back(std::move(row));
  }
  return rows;
}

struct Output {
  std::ofstream file;
  std::ostream* out = &std::cout;
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file.open(path);
    if (!file) throw InputError("cannot write " + path);
    out = &file;
  }
  std::ostream& operator*() { return *out; }
};

void write_row(std::ostream& o, const std::vector<u32>& w) {
  for (std::size_t i = 0; i < w.size(); ++i) o << (i ? " " : "") << w[i];
  o << '\n';
}

Precomp load_or_build(const CodeSpec& spec, const std::string& path) {
  if (path.empty()) return precompute(spec);
  return load_precomp_file(path, spec);
}

int selftest() {
  int bad = 0;
  auto report = [&](const std::string& name, bool ok) {
    std::cout << (ok ? "ok   " : "FAIL ") << name << '\n';
    bad += !ok;
  };
  const std::vector<std::string> specs = {
      "backend=rational\np=13\nD=x=0 x=1 x=2 x=3 x=4 x=5 x=6 x=7\nG=3*Pinf\ns=1\nell=2\noffset=12\n",
      "backend=hermitian\nq0=2\nD=all\nG=2*Pinf\ns=1\nell=1\n",
      "backend=hermitian\nq0=2\nD=all\nG=3*Pinf\ns=1\nell=2\n",
  };
  for (const auto& text : specs) {
    auto spec = CodeSpec::from_text(text);
    auto pre = precompute(spec);
    auto cb = make_codebook(spec);
    std::stringstream ss;
    save_precomp(ss, pre);
    std::stringstream again;
    save_precomp(again, load_precomp(ss, spec));
    report(spec.canonical() + " precomp round trip", ss.str() == again.str());
    bool enc = true;
    for (std::size_t i = 0; i < cb.words.size(); ++i) enc = enc && encode(spec, pre, cb.messages[i]) == cb.words[i];
    report(spec.canonical() + " encoder", enc);
    std::mt19937_64 rng(1);
    const long tau = spec.radius();
    bool dec = true;
    for (int it = 0; it < 100; ++it) {
      const auto& c = cb.words[rng() % cb.words.size()];
      Word r = channel(c, static_cast<long>(rng() % static_cast<u64>(tau + 1)), rng(), spec.field());
      auto res = decode(spec, pre, r);
      dec = dec && !res.fail && res.messages == brute_force_list_decode(cb, r, tau);
    }
    report(spec.canonical() + " decoder vs exhaustive list", dec);
  }
  return bad ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"List decoding of algebraic geometry codes"};
  app.require_subcommand(1);

  std::string spec_path, pre_path, in_path, out_path;
  bool emit_codewords = false, strict = false;
  long tau = -1, errors = 0, trials = 100;
  u64 seed = 1;

  auto* pc = app.add_subcommand("precompute", "build the decoder tables for a code");
  pc->add_option("-c,--code", spec_path, "code spec file")->required();
  pc->add_option("-o,--output", out_path, "precomp file")->required();

  auto* en = app.add_subcommand("encode", "encode messages, one per line");
  en->add_option("-c,--code", spec_path, "code spec file")->required();
  en->add_option("-p,--precomp", pre_path, "precomp file (built on the fly if omitted)");
  en->add_option("-i,--input", in_path, "message file")->required();
  en->add_option("-o,--output", out_path, "word file (stdout if omitted)");

  auto* de = app.add_subcommand("decode", "list-decode received words, one per line");
  de->add_option("-c,--code", spec_path, "code spec file")->required();
  de->add_option("-p,--precomp", pre_path, "precomp file (built on the fly if omitted)");
  de->add_option("-i,--input", in_path, "word file")->required();
  de->add_option("-o,--output", out_path, "JSON lines output (stdout if omitted)");
  de->add_flag("--emit-codewords", emit_codewords, "report codewords instead of messages");
  de->add_option("--tau", tau, "decoding radius (clamped to the default)");
  de->add_flag("--strict", strict, "exit 1 if any word fails to decode");

  auto* si = app.add_subcommand("simulate", "random codewords through a t-error channel");
  si->add_option("-c,--code", spec_path, "code spec file")->required();
  si->add_option("-p,--precomp", pre_path, "precomp file (built on the fly if omitted)");
  si->add_option("--errors", errors, "errors per word")->required();
  si->add_option("--trials", trials, "number of words");
  si->add_option("--seed", seed, "RNG seed");
  si->add_option("--tau", tau, "decoding radius (clamped to the default)");

  auto* st = app.add_subcommand("selftest", "decoder checks against exhaustive search");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (st->parsed()) return selftest();
    auto spec = CodeSpec::from_file(spec_path);
    std::optional<long> tau_opt;
    if (tau >= 0) tau_opt = tau;

    if (pc->parsed()) {
      save_precomp_file(out_path, precompute(spec));
      return 0;
    }
    auto pre = load_or_build(spec, pre_path);

    if (en->parsed()) {
      Output out(out_path);
      for (const auto& m : read_rows(in_path, pre.basis.size(), "message")) write_row(*out, encode(spec, pre, m));
      return 0;
    }

    if (de->parsed()) {
      Output out(out_path);
      bool any_fail = false;
      auto words = read_rows(in_path, static_cast<std::size_t>(spec.n()), "word");
      for (std::size_t i = 0; i < words.size(); ++i) {
        auto res = decode(spec, pre, words[i], tau_opt);
        json j;
        j["index"] = i;
        if (res.fail) {
          any_fail = true;
          j["status"] = "fail";
        } else {
          j["status"] = "ok";
          if (emit_codewords)
            j["codewords"] = res.codewords;
          else
            j["messages"] = res.messages;
        }
        *out << j.dump() << '\n';
      }
      return strict && any_fail ? 1 : 0;
    }

    if (si->parsed()) {
      if (trials < 0) throw InputError("--trials must be non-negative");
      std::mt19937_64 rng(seed);
      const Field F = spec.field();
      long fails = 0, recovered = 0, total_list = 0, max_list = 0;
      for (long t = 0; t < trials; ++t) {
        Message m(pre.basis.size());
        for (auto& v : m) v = F.random(rng);
        Word r = channel(encode(spec, pre, m), errors, rng(), F);
        auto res = decode(spec, pre, r, tau_opt);
        if (res.fail) {
          ++fails;
          continue;
        }
        long sz = static_cast<long>(res.messages.size());
        total_list += sz;
        max_list = std::max(max_list, sz);
        recovered += std::find(res.messages.begin(), res.messages.end(), m) != res.messages.end();
      }
      const long radius = tau_opt ? std::min(*tau_opt, spec.radius()) : spec.radius();
      json j{{"code", spec.canonical()}, {"n", spec.n()},           {"dimension", pre.basis.size()},
             {"tau", radius},           {"errors", errors},         {"trials", trials},
             {"fail", fails},           {"recovered", recovered},   {"max_list", max_list},
             {"mean_list", trials > fails ? double(total_list) / double(trials - fails) : 0.0}};
      std::cout << j.dump() << '\n';
      return 0;
    }
  } catch (const InputError& e) {
    std::cerr << "agdec: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "agdec: error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
