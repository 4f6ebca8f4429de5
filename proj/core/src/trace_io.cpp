#include "cusign/trace_io.hpp"

#include <fstream>
#include <ostream>

#include "cusign/errors.hpp"
#include "cusign/report.hpp"
#include "cusign/version.hpp"

namespace cusign {

void write_trace_csv(const ScenarioTrace& trace, std::uint64_t seed, std::ostream& out) {
  out << "# schema = " << kTraceSchema << "\n";
  out << "# version = " << kVersion << "\n";
  out << "# seed = " << seed << "\n";
  out << "k,t,x0,x1,x2,xhat0,xhat1,xhat2,y0,y1,y2,xi0,xi1,xi2,r0,r1,r2,z,"
         "S_plus,S_minus,zeta_plus,zeta_minus,alpha_plus,alpha_minus,"
         "C,zeta_C,alpha_C,cusign_detect,cusum_detect\n";
  for (const StepRecord& rec : trace.records) {
    out << rec.k << ',' << format_double(rec.t);
    for (double v : rec.x) out << ',' << format_double(v);
    for (double v : rec.xhat) out << ',' << format_double(v);
    for (double v : rec.y) out << ',' << format_double(v);
    for (double v : rec.xi) out << ',' << format_double(v);
    for (double v : rec.r) out << ',' << format_double(v);
    out << ',' << format_double(rec.z) << ',' << rec.s_plus << ',' << rec.s_minus << ','
        << rec.zeta_plus << ',' << rec.zeta_minus << ',' << format_double(rec.alpha_plus) << ','
        << format_double(rec.alpha_minus) << ',' << format_double(rec.c) << ',' << rec.zeta_c
        << ',' << format_double(rec.alpha_c) << ',' << rec.cusign_detect << ','
        << rec.cusum_detect << "\n";
  }
}

void write_trace_csv(const ScenarioTrace& trace, std::uint64_t seed, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("write_trace_csv: cannot open '" + path + "' for writing");
  write_trace_csv(trace, seed, out);
}

}  // namespace cusign
