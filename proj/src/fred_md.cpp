#include "fmmde/fred_md.hpp"

namespace fmmde::fred_md {

namespace {

constexpr SeriesInfo kSeries[] = {
    {1, "RPI", "Real Personal Income", 1, 5},
    {2, "W875RX1", "Real personal income ex transfer receipts", 1, 5},
    {3, "DPCERA3M086SBEA", "Real personal consumption expenditures", 4, 5},
    {4, "CMRMTSPLx", "Real Manu. and Trade Industries Sales", 4, 5},
    {5, "RETAILx", "Retail and Food Services Sales", 4, 5},
    {6, "INDPRO", "IP Index", 1, 5},
    {7, "IPFPNSS", "IP: Final Products and Nonindustrial Supplies", 1, 5},
    {8, "IPFINAL", "IP: Final Products (Market Group)", 1, 5},
    {9, "IPCONGD", "IP: Consumer Goods", 1, 5},
    {10, "IPDCONGD", "IP: Durable Consumer Goods", 1, 5},
    {11, "IPNCONGD", "IP: Nondurable Consumer Goods", 1, 5},
    {12, "IPBUSEQ", "IP: Business Equipment", 1, 5},
    {13, "IPMAT", "IP: Materials", 1, 5},
    {14, "IPDMAT", "IP: Durable Materials", 1, 5},
    {15, "IPNMAT", "IP: Nondurable Materials", 1, 5},
    {16, "IPMANSICS", "IP: Manufacturing (SIC)", 1, 5},
    {17, "IPB51222s", "IP: Residential Utilities", 1, 5},
    {18, "IPFUELS", "IP: Fuels", 1, 5},
    {19, "CUMFNS", "Capacity Utilization: Manufacturing", 1, 2},
    {20, "HWI", "Help-Wanted Index for United States", 2, 2},
    {21, "HWIURATIO", "Ratio of Help Wanted/No. Unemployed", 2, 2},
    {22, "CLF16OV", "Civilian Labor Force", 2, 5},
    {23, "CE16OV", "Civilian Employment", 2, 5},
    {24, "UNRATE", "Civilian Unemployment Rate", 2, 2},
    {25, "UEMPMEAN", "Average Duration of Unemployment (Weeks)", 2, 2},
    {26, "UEMPLT5", "Civilians Unemployed - Less Than 5 Weeks", 2, 5},
    {27, "UEMP5TO14", "Civilians Unemployed for 5-14 Weeks", 2, 5},
    {28, "UEMP15OV", "Civilians Unemployed - 15 Weeks & Over", 2, 5},
    {29, "UEMP15T26", "Civilians Unemployed for 15-26 Weeks", 2, 5},
    {30, "UEMP27OV", "Civilians Unemployed for 27 Weeks and Over", 2, 5},
    {31, "CLAIMSx", "Initial Claims", 2, 5},
    {32, "PAYEMS", "All Employees: Total nonfarm", 2, 5},
    {33, "USGOOD", "All Employees: Goods-Producing Industries", 2, 5},
    {34, "CES1021000001", "All Employees: Mining and Logging: Mining", 2, 5},
    {35, "USCONS", "All Employees: Construction", 2, 5},
    {36, "MANEMP", "All Employees: Manufacturing", 2, 5},
    {37, "DMANEMP", "All Employees: Durable goods", 2, 5},
    {38, "NDMANEMP", "All Employees: Nondurable goods", 2, 5},
    {39, "SRVPRD", "All Employees: Service-Providing Industries", 2, 5},
    {40, "USTPU", "All Employees: Trade, Transportation & Utilities", 2, 5},
    {41, "USWTRADE", "All Employees: Wholesale Trade", 2, 5},
    {42, "USTRADE", "All Employees: Retail Trade", 2, 5},
    {43, "USFIRE", "All Employees: Financial Activities", 2, 5},
    {44, "USGOVT", "All Employees: Government", 2, 5},
    {45, "CES0600000007", "Avg Weekly Hours : Goods-Producing", 2, 1},
    {46, "AWOTMAN", "Avg Weekly Overtime Hours : Manufacturing", 2, 2},
    {47, "AWHMAN", "Avg Weekly Hours : Manufacturing", 2, 1},
    {48, "HOUST", "Housing Starts: Total New Privately Owned", 3, 4},
    {49, "HOUSTNE", "Housing Starts, Northeast", 3, 4},
    {50, "HOUSTMW", "Housing Starts, Midwest", 3, 4},
    {51, "HOUSTS", "Housing Starts, South", 3, 4},
    {52, "HOUSTW", "Housing Starts, West", 3, 4},
    {53, "PERMIT", "New Private Housing Permits (SAAR)", 3, 4},
    {54, "PERMITNE", "New Private Housing Permits, Northeast (SAAR)", 3, 4},
    {55, "PERMITMW", "New Private Housing Permits, Midwest (SAAR)", 3, 4},
    {56, "PERMITS", "New Private Housing Permits, South (SAAR)", 3, 4},
    {57, "PERMITW", "New Private Housing Permits, West (SAAR)", 3, 4},
    {58, "AMDMNOx", "New Orders for Durable Goods", 4, 5},
    {59, "AMDMUOx", "Unfilled Orders for Durable Goods", 4, 5},
    {60, "BUSINVx", "Total Business Inventories", 4, 5},
    {61, "ISRATIOx", "Total Business: Inventories to Sales Ratio", 4, 2},
    {62, "M1SL", "M1 Money Stock", 5, 6},
    {63, "M2SL", "M2 Money Stock", 5, 6},
    {64, "M2REAL", "Real M2 Money Stock", 5, 5},
    {65, "BOGMBASE", "Monetary Base", 5, 6},
    {66, "TOTRESNS", "Total Reserves of Depository Institutions", 5, 6},
    {67, "NONBORRES", "Reserves Of Depository Institutions", 5, 7},
    {68, "BUSLOANS", "Commercial and Industrial Loans", 5, 6},
    {69, "REALLN", "Real Estate Loans at All Commercial Banks", 5, 6},
    {70, "NONREVSL", "Total Nonrevolving Credit", 5, 6},
    {71, "CONSPI", "Nonrevolving consumer credit to Personal Income", 5, 2},
    {72, "S&P 500", "S&Ps Common Stock Price Index: Composite", 8, 5},
    {73, "S&P: indust", "S&Ps Common Stock Price Index: Industrials", 8, 5},
    {74, "S&P div yield", "S&Ps Composite Common Stock: Dividend Yield", 8, 2},
    {75, "S&P PE ratio", "S&Ps Composite Common Stock: Price-Earnings Ratio", 8, 5},
    {76, "FEDFUNDS", "Effective Federal Funds Rate", 6, 2},
    {77, "CP3Mx", "3-Month AA Financial Commercial Paper Rate", 6, 2},
    {78, "TB3MS", "3-Month Treasury Bill:", 6, 2},
    {79, "TB6MS", "6-Month Treasury Bill:", 6, 2},
    {80, "GS1", "1-Year Treasury Rate", 6, 2},
    {81, "GS5", "5-Year Treasury Rate", 6, 2},
    {82, "GS10", "10-Year Treasury Rate", 6, 2},
    {83, "AAA", "Moodys Seasoned Aaa Corporate Bond Yield", 6, 2},
    {84, "BAA", "Moodys Seasoned Baa Corporate Bond Yield", 6, 2},
    {85, "COMPAPFFx", "3-Month Commercial Paper Minus FEDFUNDS", 6, 1},
    {86, "TB3SMFFM", "3-Month Treasury C Minus FEDFUNDS", 6, 1},
    {87, "TB6SMFFM", "6-Month Treasury C Minus FEDFUNDS", 6, 1},
    {88, "T1YFFM", "1-Year Treasury C Minus FEDFUNDS", 6, 1},
    {89, "T5YFFM", "5-Year Treasury C Minus FEDFUNDS", 6, 1},
    {90, "T10YFFM", "10-Year Treasury C Minus FEDFUNDS", 6, 1},
    {91, "AAAFFM", "Moodys Aaa Corporate Bond Minus FEDFUNDS", 6, 1},
    {92, "BAAFFM", "Moodys Baa Corporate Bond Minus FEDFUNDS", 6, 1},
    {93, "EXSZUSx", "Switzerland / U.S. Foreign Exchange Rate", 6, 5},
    {94, "EXJPUSx", "Japan / U.S. Foreign Exchange Rate", 6, 5},
    {95, "EXUSUKx", "U.S. / U.K. Foreign Exchange Rate", 6, 5},
    {96, "EXCAUSx", "Canada / U.S. Foreign Exchange Rate", 6, 5},
    {97, "WPSFD49207", "PPI: Finished Goods", 7, 6},
    {98, "WPSFD49502", "PPI: Finished Consumer Goods", 7, 6},
    {99, "WPSID61", "PPI: Intermediate Materials", 7, 6},
    {100, "WPSID62", "PPI: Crude Materials", 7, 6},
    {101, "OILPRICEx", "Crude Oil, spliced WTI and Cushing", 7, 6},
    {102, "PPICMM", "PPI: Metals and metal products:", 7, 6},
    {103, "CPIAUCSL", "CPI : All Items", 7, 6},
    {104, "CPIAPPSL", "CPI : Apparel", 7, 6},
    {105, "CPITRNSL", "CPI : Transportation", 7, 6},
    {106, "CPIMEDSL", "CPI : Medical Care", 7, 6},
    {107, "CUSR0000SAC", "CPI : Commodities", 7, 6},
    {108, "CUSR0000SAD", "CPI : Durables", 7, 6},
    {109, "CUSR0000SAS", "CPI : Services", 7, 6},
    {110, "CPIULFSL", "CPI : All Items Less Food", 7, 6},
    {111, "CUSR0000SA0L2", "CPI : All items less shelter", 7, 6},
    {112, "CUSR0000SA0L5", "CPI : All items less medical care", 7, 6},
    {113, "PCEPI", "Personal Cons. Expend.: Chain Index", 7, 6},
    {114, "DDURRG3M086SBEA", "Personal Cons. Exp: Durable goods", 7, 6},
    {115, "DNDGRG3M086SBEA", "Personal Cons. Exp: Nondurable goods", 7, 6},
    {116, "DSERRG3M086SBEA", "Personal Cons. Exp: Services", 7, 6},
    {117, "CES0600000008", "Avg Hourly Earnings : Goods-Producing", 2, 6},
    {118, "CES2000000008", "Avg Hourly Earnings : Construction", 2, 6},
    {119, "CES3000000008", "Avg Hourly Earnings : Manufacturing", 2, 6},
    {120, "UMCSENTx", "Consumer Sentiment Index", 4, 2},
    {121, "DTCOLNVHFNM", "Consumer Motor Vehicle Loans Outstanding", 5, 6},
    {122, "DTCTHFNM", "Total Consumer Loans and Leases Outstanding", 5, 6},
    {123, "INVEST", "Securities in Bank Credit at All Commercial Banks", 5, 6},
};

}  // namespace

std::span<const SeriesInfo> builtin_series() { return kSeries; }

std::optional<SeriesInfo> find_series(std::string_view mnemonic) {
  for (const auto& s : kSeries) {
    if (s.mnemonic == mnemonic) return s;
  }
  return std::nullopt;
}

std::string_view group_name(int group) {
  if (group < 1 || group > 8) return "Ungrouped";
  return kGroupNames[static_cast<std::size_t>(group - 1)];
}

std::string_view tcode_legend() {
  return "tcode  transformation of level x_t\n"
         "  1    x_t (no transformation)\n"
         "  2    first difference of x_t\n"
         "  3    second difference of x_t\n"
         "  4    log(x_t)\n"
         "  5    first difference of log(x_t)\n"
         "  6    second difference of log(x_t)\n"
         "  7    first difference of (x_t / x_{t-1} - 1)\n";
}

}  // namespace fmmde::fred_md
