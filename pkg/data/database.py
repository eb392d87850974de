
from enum import Enum
from collections.abc import Callable
from abc import ABC, abstractmethod

from potatodb.db import PotatoDB

class TableEnum(Enum):
    """
    Tables of the lab's store. Each value is the name of the JSON file
    PotatoDB keeps under the database folder.
    """
    REPORTS = "reports"

class DatabaseInterface(ABC):
    """
    The `DatabaseInterface` class defines the operations the report store
    needs. Records are never edited in place: a rerun stores a new report.
    """
    @abstractmethod
    def create(self, table: TableEnum, obj: dict) -> None:
        """
        Abstract method for `create` operation.
        This method inserts a new record on the selected table.

        Args:
            table (TableEnum): Table to insert the new record
            obj (dict): Record to be inserted
        """

    @abstractmethod
    def read(self, table: TableEnum, query: Callable) -> list[dict]:
        """
        Abstract method for `read` operation.
        This method finds and returns all the records of a given table that
        satisfy the given query.

        Args:
            table (TableEnum): Table to look for record(s)
            query (Callable): Predicate over a record

        Returns:
            list[dict]: list of found records
        """

    @abstractmethod
    def delete(self, table: TableEnum, query: Callable) -> None:
        """
        Abstract method for `delete` operation.
        This method deletes all the records of a given table that satisfy the
        given query.

        Args:
            table (TableEnum): Table to delete records from
            query (Callable): Predicate over a record
        """


class PotatoDatabase(DatabaseInterface):
    """
    `DatabaseInterface` backed by a `PotatoDB` folder of JSON files, one per
    table.
    """
    def __init__(self, foldername: str):
        """
        Args:
            foldername (str): Folder holding the table files. Tables missing
        from it start empty.
        """
        self.db = PotatoDB(foldername)

    def create(self, table: TableEnum, obj: dict) -> None:
        """
        Inserts a report record. The record must already be JSON
        serializable; `ReportModel` takes care of numpy scalars and
        non-finite floats.

        Args:
            table (TableEnum): Table where the record should be inserted.
            obj (dict): Record to insert.
        """
        self.db.insert(table.value, obj)

    def read(self, table: TableEnum, query: Callable) -> list[dict]:
        """
        Returns every record of `table` for which `query` is true, in
        insertion order.

        Args:
            table (TableEnum): Table where the records should be read from.
            query (Callable): Predicate over a record.

        Returns:
            list[dict]: list of found records
        """
        return self.db.query(table.value, query)

    def delete(self, table: TableEnum, query: Callable) -> None:
        """
        Deletes every record of `table` for which `query` is true.

        Args:
            table (TableEnum): Table where the records should be deleted.
            query (Callable): Predicate over a record.
        """
        self.db.delete(table.value, query)
