"""
Exportador de resultados: CSV y JSON con la huella de la configuración en la
cabecera, y un libro Excel opcional con las mismas tablas.
"""
import csv
import json
import logging
import os

import openpyxl
from openpyxl.styles import Alignment, Border, Font, PatternFill, Side
from openpyxl.utils import get_column_letter

from eventos import formatear_real

_logger = logging.getLogger(__name__)


def _celda_texto(valor):
    if isinstance(valor, float):
        return formatear_real(valor)
    if hasattr(valor, "value"):
        return str(valor.value)
    return str(valor)


def asegurar_directorio(ruta):
    directorio = os.path.dirname(ruta)
    if directorio:
        os.makedirs(directorio, exist_ok=True)


def escribir_csv(ruta, encabezados, filas, huella, comentarios=()):
    """
    CSV con reales a 17 cifras. La primera línea es '# huella=<hex>'; le siguen
    los comentarios opcionales, también con '#'.
    """
    asegurar_directorio(ruta)
    with open(ruta, "w", encoding="utf-8", newline="") as f:
        f.write(f"# huella={huella}\n")
        for comentario in comentarios:
            f.write(f"# {comentario}\n")
        escritor = csv.writer(f, lineterminator="\n")
        escritor.writerow(encabezados)
        for fila in filas:
            escritor.writerow([_celda_texto(v) for v in fila])
    _logger.info("archivo escrito: %s", ruta)
    return ruta


def leer_csv(ruta):
    """Devuelve (huella, encabezados, filas como texto)"""
    huella = None
    with open(ruta, encoding="utf-8", newline="") as f:
        lineas = [linea for linea in f]
    datos = []
    for linea in lineas:
        if linea.startswith("#"):
            if huella is None and "huella=" in linea:
                huella = linea.split("huella=", 1)[1].strip()
            continue
        datos.append(linea)
    filas = list(csv.reader(datos))
    return huella, filas[0], filas[1:]


def escribir_json(ruta, informes, huella):
    """{"fingerprint": huella, "reports": [{name, value, tol, inputs}, ...]}"""
    asegurar_directorio(ruta)
    contenido = {"fingerprint": huella, "reports": [informe.a_dict() for informe in informes]}
    with open(ruta, "w", encoding="utf-8", newline="\n") as f:
        json.dump(contenido, f, indent=2, sort_keys=True)
        f.write("\n")
    _logger.info("archivo escrito: %s", ruta)
    return ruta


class ExportadorExcel:
    """Junta las tablas de una corrida en un libro Excel, una hoja por tabla"""

    def __init__(self, huella):
        self.huella = huella
        self.hojas = []

    def agregar_hoja(self, nombre, encabezados, filas):
        self.hojas.append((nombre, list(encabezados), [list(f) for f in filas]))

    def exportar(self, nombre_archivo="resultados_billar.xlsx"):
        """Exporta todas las hojas agregadas a un archivo Excel"""
        wb = openpyxl.Workbook()

        # Eliminar hoja por defecto
        if "Sheet" in wb.sheetnames:
            wb.remove(wb["Sheet"])

        for nombre, encabezados, filas in self.hojas:
            self._crear_hoja(wb, nombre, encabezados, filas)
        self._crear_hoja_huella(wb)

        asegurar_directorio(nombre_archivo)
        wb.save(nombre_archivo)
        _logger.info("archivo Excel generado: %s", nombre_archivo)
        return nombre_archivo

    def _crear_hoja(self, wb, nombre, encabezados, filas):
        ws = wb.create_sheet(nombre[:31])

        header_fill = PatternFill(start_color="366092", end_color="366092", fill_type="solid")
        header_font = Font(bold=True, color="FFFFFF", size=11)
        border = Border(
            left=Side(style='thin'),
            right=Side(style='thin'),
            top=Side(style='thin'),
            bottom=Side(style='thin')
        )

        for col, header in enumerate(encabezados, 1):
            cell = ws.cell(row=1, column=col)
            cell.value = header
            cell.fill = header_fill
            cell.font = header_font
            cell.alignment = Alignment(horizontal='center', vertical='center', wrap_text=True)
            cell.border = border

        for idx, fila in enumerate(filas, 2):
            for col, valor in enumerate(fila, 1):
                cell = ws.cell(row=idx, column=col)
                cell.value = valor.value if hasattr(valor, "value") else valor
                cell.border = border

        for col in range(1, len(encabezados) + 1):
            ws.column_dimensions[get_column_letter(col)].width = 18

        # Congelar primera fila
        ws.freeze_panes = "A2"

    def _crear_hoja_huella(self, wb):
        ws = wb.create_sheet("Configuración")
        ws.cell(row=1, column=1).value = "Huella"
        ws.cell(row=1, column=1).font = Font(bold=True, size=11)
        ws.cell(row=1, column=2).value = self.huella
        ws.column_dimensions['A'].width = 20
        ws.column_dimensions['B'].width = 24
