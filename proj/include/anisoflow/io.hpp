#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "anisoflow/diagnostics.hpp"
#include "anisoflow/integrator.hpp"

namespace anisoflow {

/// Header of the ledger time series.
const std::vector<std::string>& ledger_csv_columns();

/// One CSV row, values printed with %.17g so they round-trip exactly.
std::string ledger_csv_row(const EnergyLedger& ledger);

/// Streams ledgers to a CSV file as soon as their residual is known.
class CsvLedgerSink : public RunObserver {
public:
    explicit CsvLedgerSink(const std::string& path);
    ~CsvLedgerSink() override;
    CsvLedgerSink(const CsvLedgerSink&) = delete;
    CsvLedgerSink& operator=(const CsvLedgerSink&) = delete;

    void on_ledger(const EnergyLedger& ledger) override;
    void on_finish(const RunReport& report) override;

private:
    std::FILE* file_ = nullptr;
};

/// JSON mirror of a RunReport. Non-finite numbers become null.
nlohmann::json to_json(const RunReport& report);
nlohmann::json to_json(const StepperConfig& config);

void write_json(const std::string& path, const nlohmann::json& value);

}  // namespace anisoflow
