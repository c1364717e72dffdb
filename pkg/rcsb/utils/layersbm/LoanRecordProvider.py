##
# File:    LoanRecordProvider.py
# Author:  J. Westbrook
# Date:    13-Jan-2026
#
# Updates:
#  20-Jan-2026 jdw persist the global bank index alongside the monthly graph store
#  27-Jan-2026 jdw report row numbers for malformed records and count self-loops per month
##
"""
Ingest loan records (CSV) into monthly layered multigraphs and manage the monthly graph store.

CSV format (header required):  lender,borrower,month,amount,maturity,rate
"""

__docformat__ = "restructuredtext en"
__author__ = "John Westbrook"
__email__ = "john.westbrook@rcsb.org"
__license__ = "Apache 2.0"

import csv
import io
import logging
import math
import os
import re

from rcsb.utils.io.MarshalUtil import MarshalUtil
from rcsb.utils.layersbm.LayeredMultigraph import LayeredMultigraph
from rcsb.utils.layersbm.LayeredMultigraph import LoanRecord
from rcsb.utils.layersbm.LayeredMultigraph import MaturityClass

logger = logging.getLogger(__name__)


class LoanRecordProvider(object):
    """Ingest loan records into monthly layered multigraphs and read/write the monthly graph store."""

    CSV_HEADER = ["lender", "borrower", "month", "amount", "maturity", "rate"]

    def __init__(self, workPath=None, **kwargs):
        self.__workPath = workPath if workPath else "."
        self.__graphFileTemplate = kwargs.get("graphFileTemplate", "month-%04d.json")
        self.__mU = MarshalUtil(workPath=self.__workPath)
        self.__diagD = {}
        self.__bankIndexD = {}

    # --- records ---
    def readRecords(self, csvPath):
        """Read loan records from a CSV file.

        Blank lines and lines starting with '#' are skipped. Data rows are numbered from 1 after the header.

        Raises:
            ValueError: missing/invalid header or any malformed data row (message names the row number)
        """
        lineL = self.__mU.doImport(csvPath, fmt="list")
        if not lineL:
            raise ValueError("empty record file %s" % csvPath)
        lineL = [ln for ln in lineL if ln.strip() and not ln.lstrip().startswith("#")]
        if not lineL:
            raise ValueError("no header in record file %s" % csvPath)
        header = [fld.strip() for fld in next(csv.reader([lineL[0]]))]
        if header != LoanRecordProvider.CSV_HEADER:
            raise ValueError("unexpected header %r in %s" % (header, csvPath))
        recL = []
        for rowNo, fieldL in enumerate(csv.reader(lineL[1:]), start=1):
            recL.append(self.__parseRow(fieldL, rowNo))
        logger.info("Read %d loan records from %s", len(recL), csvPath)
        return recL

    def writeRecords(self, recordList, csvPath, headerComment=None):
        """Write loan records in the ingestion CSV format (exact inverse of readRecords())."""
        lineL = []
        if headerComment:
            lineL.append("# " + headerComment)
        lineL.append(self.__toCsvLine(LoanRecordProvider.CSV_HEADER))
        for rec in recordList:
            rate = "" if rec.rate is None else repr(float(rec.rate))
            lineL.append(self.__toCsvLine([rec.lender, rec.borrower, int(rec.month), repr(float(rec.amount)), self.__maturityCode(rec.maturity), rate]))
        self.__mkdirFor(csvPath)
        ok = self.__mU.doExport(csvPath, lineL, fmt="list")
        logger.info("Wrote %d loan records to %s (%r)", len(recordList), csvPath, ok)
        return ok

    def ingest(self, records):
        """Aggregate loan records by issuance month into layered multigraphs (one layer per maturity class).

        Args:
            records (iterable): LoanRecord objects

        Returns:
            dict: {month: LayeredMultigraph}, nodes per month are the active banks sorted by identifier

        Raises:
            ValueError: invalid record (message names the record row number)
        """
        monthD = {}
        for rowNo, rec in enumerate(records, start=1):
            rec = self.__validateRecord(rec, rowNo)
            monthD.setdefault(rec.month, []).append(rec)
        #
        numLayers = len(MaturityClass.codes())
        graphD = {}
        self.__diagD = {}
        allBankS = set()
        for month in sorted(monthD):
            recL = monthD[month]
            bankL = sorted({rec.lender for rec in recL} | {rec.borrower for rec in recL})
            allBankS.update(bankL)
            idxD = {bankId: ii for ii, bankId in enumerate(bankL)}
            layers = [[] for _ in range(numLayers)]
            selfLoops = 0
            for rec in recL:
                if rec.lender == rec.borrower:
                    selfLoops += 1
                layers[rec.maturity.ordinal].append((idxD[rec.lender], idxD[rec.borrower], rec.amount))
            graphD[month] = LayeredMultigraph(bankL, layers, MaturityClass.codes())
            self.__diagD[month] = {"records": len(recL), "active_banks": len(bankL), "self_loops": selfLoops}
            if selfLoops:
                logger.warning("Month %d retains %d self-loop loans", month, selfLoops)
        self.__bankIndexD = {bankId: ii for ii, bankId in enumerate(sorted(allBankS))}
        logger.info("Ingested %d months with %d distinct banks", len(graphD), len(self.__bankIndexD))
        return graphD

    def getDiagnostics(self):
        return self.__diagD

    def getBankIndex(self):
        return self.__bankIndexD

    # --- graph store ---
    def exportGraph(self, graph, filePath):
        self.__mkdirFor(filePath)
        return self.__mU.doExport(filePath, graph.toDict(), fmt="json", indent=0)

    def importGraph(self, filePath):
        return LayeredMultigraph.fromDict(self.__mU.doImport(filePath, fmt="json"))

    def exportStore(self, graphD, dirPath, meta=None):
        """Write one graph JSON document per month plus the bank index and ingest diagnostics."""
        ok = True
        self.__mU.mkdir(dirPath)
        for month in sorted(graphD):
            fp = os.path.join(dirPath, self.__graphFileTemplate % month)
            ok = self.exportGraph(graphD[month], fp) and ok
        bankIndexD = self.__bankIndexD if self.__bankIndexD else self.__buildBankIndex(graphD)
        ok = self.__mU.doExport(os.path.join(dirPath, "bank-index.json"), {"_meta": meta or {}, "banks": bankIndexD}, fmt="json", indent=0) and ok
        diagD = {str(month): vD for month, vD in sorted(self.__diagD.items())}
        ok = self.__mU.doExport(os.path.join(dirPath, "ingest-diagnostics.json"), {"_meta": meta or {}, "months": diagD}, fmt="json", indent=0) and ok
        logger.info("Exported %d monthly graphs to %s (%r)", len(graphD), dirPath, ok)
        return ok

    def importStore(self, dirPath):
        """Read the monthly graph documents of a store directory.

        Returns:
            dict: {month: LayeredMultigraph}
        """
        graphD = {}
        pattern = re.compile(r"^month-(\d+)\.json$")
        for fn in sorted(os.listdir(dirPath)):
            mt = pattern.match(fn)
            if not mt:
                continue
            graphD[int(mt.group(1))] = self.importGraph(os.path.join(dirPath, fn))
        bankFp = os.path.join(dirPath, "bank-index.json")
        if self.__mU.exists(bankFp):
            self.__bankIndexD = self.__mU.doImport(bankFp, fmt="json").get("banks", {})
        logger.info("Imported %d monthly graphs from %s", len(graphD), dirPath)
        return graphD

    def getGraphFileName(self, month):
        return self.__graphFileTemplate % month

    # --- private ---
    def __parseRow(self, fieldL, rowNo):
        if len(fieldL) != len(LoanRecordProvider.CSV_HEADER):
            raise ValueError("row %d: expected %d fields, found %d" % (rowNo, len(LoanRecordProvider.CSV_HEADER), len(fieldL)))
        lender, borrower, month, amount, maturity, rate = [fld.strip() for fld in fieldL]
        try:
            month = int(month)
            amount = float(amount)
            rate = float(rate) if rate else None
        except ValueError as e:
            raise ValueError("row %d: malformed numeric field (%s)" % (rowNo, str(e)))
        try:
            maturity = MaturityClass.fromCode(maturity)
        except ValueError:
            raise ValueError("row %d: unknown maturity code %r" % (rowNo, maturity))
        return self.__validateRecord(LoanRecord(lender, borrower, month, amount, maturity, rate), rowNo)

    def __validateRecord(self, rec, rowNo):
        if not rec.lender or not rec.borrower:
            raise ValueError("row %d: missing bank identifier" % rowNo)
        maturity = rec.maturity
        if not isinstance(maturity, MaturityClass):
            try:
                maturity = MaturityClass.fromCode(maturity)
            except ValueError:
                raise ValueError("row %d: unknown maturity code %r" % (rowNo, rec.maturity))
        amount = float(rec.amount)
        if not math.isfinite(amount) or amount <= 0.0:
            raise ValueError("row %d: non-positive amount %r" % (rowNo, rec.amount))
        rate = rec.rate
        if rate is not None:
            rate = float(rate)
            if not math.isfinite(rate) or rate < 0.0:
                raise ValueError("row %d: negative or invalid rate %r" % (rowNo, rec.rate))
        return LoanRecord(str(rec.lender), str(rec.borrower), int(rec.month), amount, maturity, rate)

    def __maturityCode(self, maturity):
        return maturity.code if isinstance(maturity, MaturityClass) else MaturityClass.fromCode(maturity).code

    def __toCsvLine(self, fieldL):
        sio = io.StringIO()
        csv.writer(sio, lineterminator="").writerow(fieldL)
        return sio.getvalue()

    def __buildBankIndex(self, graphD):
        bankS = set()
        for graph in graphD.values():
            bankS.update(graph.getNodes())
        return {bankId: ii for ii, bankId in enumerate(sorted(bankS))}

    def __mkdirFor(self, filePath):
        dirPath = os.path.dirname(filePath)
        if dirPath:
            self.__mU.mkdir(dirPath)
