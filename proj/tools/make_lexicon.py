#!/usr/bin/env python3
"""Expands the verb table and noun classes below into data/lexicon_{fr,it}.json.

The generator in include/blm/synthetic.hpp performs no morphology: every
inflected cell it needs is spelled out here. Re-run after editing:

    python3 tools/make_lexicon.py data/
"""

import json
import sys
from pathlib import Path

# (det, noun, gender, number)
FR_AGENTS = [
    ("le", "garçon", "m", "sg"), ("la", "fille", "f", "sg"), ("l'", "étudiant", "m", "sg"),
    ("l'", "étudiante", "f", "sg"), ("le", "professeur", "m", "sg"), ("la", "directrice", "f", "sg"),
    ("l'", "enfant", "m", "sg"), ("le", "voisin", "m", "sg"), ("la", "voisine", "f", "sg"),
    ("le", "médecin", "m", "sg"), ("l'", "infirmière", "f", "sg"), ("le", "chef", "m", "sg"),
    ("la", "cliente", "f", "sg"), ("le", "client", "m", "sg"), ("l'", "ingénieur", "m", "sg"),
    ("l'", "avocate", "f", "sg"), ("le", "juge", "m", "sg"), ("la", "secrétaire", "f", "sg"),
    ("le", "gardien", "m", "sg"), ("la", "chanteuse", "f", "sg"), ("le", "chanteur", "m", "sg"),
    ("l'", "écrivain", "m", "sg"), ("le", "musicien", "m", "sg"), ("l'", "auteur", "m", "sg"),
]

IT_AGENTS = [
    ("il", "ragazzo", "m", "sg"), ("la", "ragazza", "f", "sg"), ("lo", "studente", "m", "sg"),
    ("la", "studentessa", "f", "sg"), ("il", "professore", "m", "sg"), ("la", "direttrice", "f", "sg"),
    ("il", "bambino", "m", "sg"), ("il", "vicino", "m", "sg"), ("la", "vicina", "f", "sg"),
    ("il", "medico", "m", "sg"), ("l'", "infermiera", "f", "sg"), ("lo", "chef", "m", "sg"),
    ("la", "cliente", "f", "sg"), ("il", "cliente", "m", "sg"), ("l'", "ingegnere", "m", "sg"),
    ("l'", "avvocata", "f", "sg"), ("il", "giudice", "m", "sg"), ("la", "segretaria", "f", "sg"),
    ("il", "custode", "m", "sg"), ("la", "cantante", "f", "sg"), ("il", "cantante", "m", "sg"),
    ("lo", "scrittore", "m", "sg"), ("il", "musicista", "m", "sg"), ("l'", "autore", "m", "sg"),
]

FR_THEMES = {
    "food": [("le", "gâteau", "m", "sg"), ("la", "soupe", "f", "sg"), ("le", "pain", "m", "sg"),
             ("la", "pizza", "f", "sg"), ("les", "légumes", "m", "pl"), ("la", "viande", "f", "sg"),
             ("le", "poisson", "m", "sg"), ("les", "fruits", "m", "pl"), ("la", "tarte", "f", "sg"),
             ("les", "pommes", "f", "pl")],
    "documents": [("la", "lettre", "f", "sg"), ("le", "rapport", "m", "sg"), ("le", "livre", "m", "sg"),
                  ("l'", "article", "m", "sg"), ("le", "message", "m", "sg"), ("le", "contrat", "m", "sg"),
                  ("les", "documents", "m", "pl"), ("le", "dossier", "m", "sg"), ("les", "notes", "f", "pl"),
                  ("le", "roman", "m", "sg")],
    "objects": [("la", "clé", "f", "sg"), ("la", "boîte", "f", "sg"), ("le", "sac", "m", "sg"),
                ("la", "lampe", "f", "sg"), ("la", "chaise", "f", "sg"), ("la", "table", "f", "sg"),
                ("le", "téléphone", "m", "sg"), ("la", "bouteille", "f", "sg"), ("les", "verres", "m", "pl"),
                ("les", "outils", "m", "pl")],
    "music": [("la", "chanson", "f", "sg"), ("le", "morceau", "m", "sg"), ("la", "mélodie", "f", "sg"),
              ("la", "symphonie", "f", "sg"), ("l'", "air", "m", "sg"), ("les", "refrains", "m", "pl"),
              ("l'", "opéra", "m", "sg"), ("la", "sonate", "f", "sg"), ("les", "chansons", "f", "pl"),
              ("le", "concerto", "m", "sg")],
    "plants": [("la", "plante", "f", "sg"), ("les", "fleurs", "f", "pl"), ("l'", "arbre", "m", "sg"),
               ("le", "jardin", "m", "sg"), ("la", "pelouse", "f", "sg"), ("les", "rosiers", "m", "pl"),
               ("le", "potager", "m", "sg"), ("les", "tomates", "f", "pl"), ("la", "haie", "f", "sg"),
               ("le", "cerisier", "m", "sg")],
    "vehicles": [("la", "voiture", "f", "sg"), ("le", "vélo", "m", "sg"), ("le", "camion", "m", "sg"),
                 ("le", "bateau", "m", "sg"), ("la", "moto", "f", "sg"), ("les", "voitures", "f", "pl"),
                 ("le", "bus", "m", "sg"), ("la", "camionnette", "f", "sg"), ("les", "vélos", "m", "pl"),
                 ("le", "tracteur", "m", "sg")],
    "people": [("le", "gagnant", "m", "sg"), ("la", "gagnante", "f", "sg"), ("les", "invités", "m", "pl"),
               ("le", "joueur", "m", "sg"), ("la", "joueuse", "f", "sg"), ("le", "touriste", "m", "sg"),
               ("les", "élèves", "m", "pl"), ("le", "candidat", "m", "sg"), ("la", "candidate", "f", "sg"),
               ("le", "stagiaire", "m", "sg")],
    "events": [("le", "projet", "m", "sg"), ("la", "réunion", "f", "sg"), ("le", "plan", "m", "sg"),
               ("le", "voyage", "m", "sg"), ("la", "fête", "f", "sg"), ("l'", "examen", "m", "sg"),
               ("les", "travaux", "m", "pl"), ("la", "conférence", "f", "sg"), ("le", "match", "m", "sg"),
               ("les", "réformes", "f", "pl")],
    "problems": [("le", "problème", "m", "sg"), ("la", "question", "f", "sg"), ("l'", "exercice", "m", "sg"),
                 ("la", "situation", "f", "sg"), ("les", "difficultés", "f", "pl"), ("la", "scène", "f", "sg"),
                 ("le", "phénomène", "m", "sg"), ("les", "règles", "f", "pl"), ("l'", "énigme", "f", "sg"),
                 ("le", "conflit", "m", "sg")],
    "buildings": [("la", "maison", "f", "sg"), ("la", "porte", "f", "sg"), ("la", "fenêtre", "f", "sg"),
                  ("le", "mur", "m", "sg"), ("la", "chambre", "f", "sg"), ("le", "pont", "m", "sg"),
                  ("les", "bureaux", "m", "pl"), ("l'", "église", "f", "sg"), ("le", "musée", "m", "sg"),
                  ("la", "tour", "f", "sg")],
    "money": [("la", "facture", "f", "sg"), ("l'", "argent", "m", "sg"), ("le", "loyer", "m", "sg"),
              ("les", "impôts", "m", "pl"), ("la", "note", "f", "sg"), ("le", "billet", "m", "sg"),
              ("les", "dépenses", "f", "pl"), ("le", "salaire", "m", "sg"), ("la", "somme", "f", "sg"),
              ("le", "prix", "m", "sg")],
}

IT_THEMES = {
    "food": [("il", "dolce", "m", "sg"), ("la", "zuppa", "f", "sg"), ("il", "pane", "m", "sg"),
             ("la", "pizza", "f", "sg"), ("le", "verdure", "f", "pl"), ("la", "carne", "f", "sg"),
             ("il", "pesce", "m", "sg"), ("gli", "spaghetti", "m", "pl"), ("la", "torta", "f", "sg"),
             ("le", "mele", "f", "pl")],
    "documents": [("la", "lettera", "f", "sg"), ("il", "rapporto", "m", "sg"), ("il", "libro", "m", "sg"),
                  ("l'", "articolo", "m", "sg"), ("il", "messaggio", "m", "sg"), ("il", "contratto", "m", "sg"),
                  ("i", "documenti", "m", "pl"), ("la", "relazione", "f", "sg"), ("gli", "appunti", "m", "pl"),
                  ("il", "romanzo", "m", "sg")],
    "objects": [("la", "chiave", "f", "sg"), ("la", "scatola", "f", "sg"), ("la", "borsa", "f", "sg"),
                ("la", "lampada", "f", "sg"), ("la", "sedia", "f", "sg"), ("il", "tavolo", "m", "sg"),
                ("il", "telefono", "m", "sg"), ("la", "bottiglia", "f", "sg"), ("i", "bicchieri", "m", "pl"),
                ("gli", "attrezzi", "m", "pl")],
    "music": [("la", "canzone", "f", "sg"), ("il", "brano", "m", "sg"), ("la", "melodia", "f", "sg"),
              ("la", "sinfonia", "f", "sg"), ("l'", "aria", "f", "sg"), ("i", "ritornelli", "m", "pl"),
              ("l'", "opera", "f", "sg"), ("la", "sonata", "f", "sg"), ("le", "canzoni", "f", "pl"),
              ("il", "concerto", "m", "sg")],
    "plants": [("la", "pianta", "f", "sg"), ("i", "fiori", "m", "pl"), ("l'", "albero", "m", "sg"),
               ("il", "giardino", "m", "sg"), ("il", "prato", "m", "sg"), ("le", "rose", "f", "pl"),
               ("l'", "orto", "m", "sg"), ("i", "pomodori", "m", "pl"), ("la", "siepe", "f", "sg"),
               ("il", "ciliegio", "m", "sg")],
    "vehicles": [("l'", "auto", "f", "sg"), ("la", "bicicletta", "f", "sg"), ("il", "camion", "m", "sg"),
                 ("la", "barca", "f", "sg"), ("la", "moto", "f", "sg"), ("le", "macchine", "f", "pl"),
                 ("l'", "autobus", "m", "sg"), ("il", "furgone", "m", "sg"), ("le", "biciclette", "f", "pl"),
                 ("il", "trattore", "m", "sg")],
    "people": [("il", "vincitore", "m", "sg"), ("la", "vincitrice", "f", "sg"), ("gli", "ospiti", "m", "pl"),
               ("il", "giocatore", "m", "sg"), ("la", "giocatrice", "f", "sg"), ("il", "turista", "m", "sg"),
               ("gli", "alunni", "m", "pl"), ("il", "candidato", "m", "sg"), ("la", "candidata", "f", "sg"),
               ("lo", "stagista", "m", "sg")],
    "events": [("il", "progetto", "m", "sg"), ("la", "riunione", "f", "sg"), ("il", "piano", "m", "sg"),
               ("il", "viaggio", "m", "sg"), ("la", "festa", "f", "sg"), ("l'", "esame", "m", "sg"),
               ("i", "lavori", "m", "pl"), ("la", "conferenza", "f", "sg"), ("la", "partita", "f", "sg"),
               ("le", "riforme", "f", "pl")],
    "problems": [("il", "problema", "m", "sg"), ("la", "domanda", "f", "sg"), ("l'", "esercizio", "m", "sg"),
                 ("la", "situazione", "f", "sg"), ("le", "difficoltà", "f", "pl"), ("la", "scena", "f", "sg"),
                 ("il", "fenomeno", "m", "sg"), ("le", "regole", "f", "pl"), ("l'", "enigma", "m", "sg"),
                 ("il", "conflitto", "m", "sg")],
    "buildings": [("la", "casa", "f", "sg"), ("la", "porta", "f", "sg"), ("la", "finestra", "f", "sg"),
                  ("il", "muro", "m", "sg"), ("la", "camera", "f", "sg"), ("il", "ponte", "m", "sg"),
                  ("gli", "uffici", "m", "pl"), ("la", "chiesa", "f", "sg"), ("il", "museo", "m", "sg"),
                  ("la", "torre", "f", "sg")],
    "money": [("il", "conto", "m", "sg"), ("i", "soldi", "m", "pl"), ("l'", "affitto", "m", "sg"),
              ("le", "tasse", "f", "pl"), ("la", "bolletta", "f", "sg"), ("il", "biglietto", "m", "sg"),
              ("le", "spese", "f", "pl"), ("lo", "stipendio", "m", "sg"), ("la", "somma", "f", "sg"),
              ("il", "prezzo", "m", "sg")],
}

# (fr infinitive, fr 3sg, fr participle m.sg, it infinitive, it 3sg, it participle m.sg, theme class)
VERBS = [
    ("manger", "mange", "mangé", "mangiare", "mangia", "mangiato", "food"),
    ("cuisiner", "cuisine", "cuisiné", "cucinare", "cucina", "cucinato", "food"),
    ("préparer", "prépare", "préparé", "preparare", "prepara", "preparato", "food"),
    ("goûter", "goûte", "goûté", "assaggiare", "assaggia", "assaggiato", "food"),
    ("couper", "coupe", "coupé", "tagliare", "taglia", "tagliato", "food"),
    ("acheter", "achète", "acheté", "comprare", "compra", "comprato", "food"),
    ("vendre", "vend", "vendu", "vendere", "vende", "venduto", "objects"),
    ("commander", "commande", "commandé", "ordinare", "ordina", "ordinato", "food"),
    ("servir", "sert", "servi", "servire", "serve", "servito", "food"),
    ("livrer", "livre", "livré", "consegnare", "consegna", "consegnato", "objects"),
    ("écrire", "écrit", "écrit", "scrivere", "scrive", "scritto", "documents"),
    ("lire", "lit", "lu", "leggere", "legge", "letto", "documents"),
    ("signer", "signe", "signé", "firmare", "firma", "firmato", "documents"),
    ("envoyer", "envoie", "envoyé", "inviare", "invia", "inviato", "documents"),
    ("recevoir", "reçoit", "reçu", "ricevere", "riceve", "ricevuto", "documents"),
    ("publier", "publie", "publié", "pubblicare", "pubblica", "pubblicato", "documents"),
    ("corriger", "corrige", "corrigé", "correggere", "corregge", "corretto", "documents"),
    ("traduire", "traduit", "traduit", "tradurre", "traduce", "tradotto", "documents"),
    ("imprimer", "imprime", "imprimé", "stampare", "stampa", "stampato", "documents"),
    ("rédiger", "rédige", "rédigé", "redigere", "redige", "redatto", "documents"),
    ("analyser", "analyse", "analysé", "analizzare", "analizza", "analizzato", "problems"),
    ("étudier", "étudie", "étudié", "studiare", "studia", "studiato", "problems"),
    ("examiner", "examine", "examiné", "esaminare", "esamina", "esaminato", "documents"),
    ("vérifier", "vérifie", "vérifié", "verificare", "verifica", "verificato", "money"),
    ("approuver", "approuve", "approuvé", "approvare", "approva", "approvato", "events"),
    ("rejeter", "rejette", "rejeté", "respingere", "respinge", "respinto", "events"),
    ("déchirer", "déchire", "déchiré", "strappare", "strappa", "strappato", "documents"),
    ("copier", "copie", "copié", "copiare", "copia", "copiato", "documents"),
    ("archiver", "archive", "archivé", "archiviare", "archivia", "archiviato", "documents"),
    ("cacher", "cache", "caché", "nascondere", "nasconde", "nascosto", "objects"),
    ("trouver", "trouve", "trouvé", "trovare", "trova", "trovato", "objects"),
    ("perdre", "perd", "perdu", "perdere", "perde", "perso", "objects"),
    ("porter", "porte", "porté", "portare", "porta", "portato", "objects"),
    ("ouvrir", "ouvre", "ouvert", "aprire", "apre", "aperto", "buildings"),
    ("fermer", "ferme", "fermé", "chiudere", "chiude", "chiuso", "buildings"),
    ("casser", "casse", "cassé", "rompere", "rompe", "rotto", "objects"),
    ("réparer", "répare", "réparé", "riparare", "ripara", "riparato", "vehicles"),
    ("laver", "lave", "lavé", "lavare", "lava", "lavato", "vehicles"),
    ("nettoyer", "nettoie", "nettoyé", "pulire", "pulisce", "pulito", "buildings"),
    ("déplacer", "déplace", "déplacé", "spostare", "sposta", "spostato", "objects"),
    ("lancer", "lance", "lancé", "lanciare", "lancia", "lanciato", "objects"),
    ("jeter", "jette", "jeté", "gettare", "getta", "gettato", "objects"),
    ("prendre", "prend", "pris", "prendere", "prende", "preso", "objects"),
    ("poser", "pose", "posé", "appoggiare", "appoggia", "appoggiato", "objects"),
    ("soulever", "soulève", "soulevé", "sollevare", "solleva", "sollevato", "objects"),
    ("toucher", "touche", "touché", "toccare", "tocca", "toccato", "objects"),
    ("emballer", "emballe", "emballé", "imballare", "imballa", "imballato", "objects"),
    ("peindre", "peint", "peint", "dipingere", "dipinge", "dipinto", "buildings"),
    ("décorer", "décore", "décoré", "decorare", "decora", "decorato", "buildings"),
    ("choisir", "choisit", "choisi", "scegliere", "sceglie", "scelto", "objects"),
    ("garder", "garde", "gardé", "custodire", "custodisce", "custodito", "objects"),
    ("remplir", "remplit", "rempli", "riempire", "riempie", "riempito", "objects"),
    ("vider", "vide", "vidé", "svuotare", "svuota", "svuotato", "objects"),
    ("chanter", "chante", "chanté", "cantare", "canta", "cantato", "music"),
    ("jouer", "joue", "joué", "suonare", "suona", "suonato", "music"),
    ("composer", "compose", "composé", "comporre", "compone", "composto", "music"),
    ("écouter", "écoute", "écouté", "ascoltare", "ascolta", "ascoltato", "music"),
    ("enregistrer", "enregistre", "enregistré", "registrare", "registra", "registrato", "music"),
    ("répéter", "répète", "répété", "ripetere", "ripete", "ripetuto", "music"),
    ("arroser", "arrose", "arrosé", "annaffiare", "annaffia", "annaffiato", "plants"),
    ("planter", "plante", "planté", "piantare", "pianta", "piantato", "plants"),
    ("cueillir", "cueille", "cueilli", "raccogliere", "raccoglie", "raccolto", "plants"),
    ("tailler", "taille", "taillé", "potare", "pota", "potato", "plants"),
    ("conduire", "conduit", "conduit", "guidare", "guida", "guidato", "vehicles"),
    ("garer", "gare", "garé", "parcheggiare", "parcheggia", "parcheggiato", "vehicles"),
    ("louer", "loue", "loué", "noleggiare", "noleggia", "noleggiato", "vehicles"),
    ("aider", "aide", "aidé", "aiutare", "aiuta", "aiutato", "people"),
    ("appeler", "appelle", "appelé", "chiamare", "chiama", "chiamato", "people"),
    ("inviter", "invite", "invité", "invitare", "invita", "invitato", "people"),
    ("féliciter", "félicite", "félicité", "premiare", "premia", "premiato", "people"),
    ("saluer", "salue", "salué", "salutare", "saluta", "salutato", "people"),
    ("soigner", "soigne", "soigné", "curare", "cura", "curato", "people"),
    ("accueillir", "accueille", "accueilli", "accogliere", "accoglie", "accolto", "people"),
    ("interroger", "interroge", "interrogé", "interrogare", "interroga", "interrogato", "people"),
    ("former", "forme", "formé", "formare", "forma", "formato", "people"),
    ("protéger", "protège", "protégé", "proteggere", "protegge", "protetto", "people"),
    ("suivre", "suit", "suivi", "seguire", "segue", "seguito", "people"),
    ("attendre", "attend", "attendu", "aspettare", "aspetta", "aspettato", "people"),
    ("chercher", "cherche", "cherché", "cercare", "cerca", "cercato", "objects"),
    ("engager", "engage", "engagé", "assumere", "assume", "assunto", "people"),
    ("photographier", "photographie", "photographié", "fotografare", "fotografa", "fotografato", "buildings"),
    ("encourager", "encourage", "encouragé", "incoraggiare", "incoraggia", "incoraggiato", "people"),
    ("organiser", "organise", "organisé", "organizzare", "organizza", "organizzato", "events"),
    ("annuler", "annule", "annulé", "annullare", "annulla", "annullato", "events"),
    ("planifier", "planifie", "planifié", "pianificare", "pianifica", "pianificato", "events"),
    ("présenter", "présente", "présenté", "presentare", "presenta", "presentato", "events"),
    ("terminer", "termine", "terminé", "terminare", "termina", "terminato", "events"),
    ("commencer", "commence", "commencé", "cominciare", "comincia", "cominciato", "events"),
    ("discuter", "discute", "discuté", "discutere", "discute", "discusso", "problems"),
    ("décrire", "décrit", "décrit", "descrivere", "descrive", "descritto", "problems"),
    ("expliquer", "explique", "expliqué", "spiegare", "spiega", "spiegato", "problems"),
    ("résoudre", "résout", "résolu", "risolvere", "risolve", "risolto", "problems"),
    ("gagner", "gagne", "gagné", "vincere", "vince", "vinto", "events"),
    ("construire", "construit", "construit", "costruire", "costruisce", "costruito", "buildings"),
    ("détruire", "détruit", "détruit", "distruggere", "distrugge", "distrutto", "buildings"),
    ("visiter", "visite", "visité", "visitare", "visita", "visitato", "buildings"),
    ("dessiner", "dessine", "dessiné", "disegnare", "disegna", "disegnato", "buildings"),
    ("payer", "paie", "payé", "pagare", "paga", "pagato", "money"),
    ("compter", "compte", "compté", "contare", "conta", "contato", "money"),
    ("dépenser", "dépense", "dépensé", "spendere", "spende", "speso", "money"),
    ("calculer", "calcule", "calculé", "calcolare", "calcola", "calcolato", "money"),
]

PER_VERB = 8


def fr_participles(ms):
    fs = ms + "e"
    mp = ms if ms.endswith("s") else ms + "s"
    return {"masc_sg": ms, "fem_sg": fs, "masc_pl": mp, "fem_pl": fs + "s"}


def it_participles(ms):
    stem = ms[:-1]
    return {"masc_sg": ms, "fem_sg": stem + "a", "masc_pl": stem + "i", "fem_pl": stem + "e"}


def np_json(np):
    det, noun, gender, number = np
    return {"det": det, "noun": noun, "gender": gender, "number": number}


def window(items, start, k):
    return [items[(start + i) % len(items)] for i in range(k)]


def build(lang):
    agents = FR_AGENTS if lang == "fr" else IT_AGENTS
    themes = FR_THEMES if lang == "fr" else IT_THEMES
    entries = []
    for i, (fr_inf, fr_3sg, fr_pp, it_inf, it_3sg, it_pp, cls) in enumerate(VERBS):
        if lang == "fr":
            verb = {"lemma": fr_inf, "active_3sg": fr_3sg, "past_participle": fr_participles(fr_pp)}
        else:
            verb = {"lemma": it_inf, "active_3sg": it_3sg, "past_participle": it_participles(it_pp)}
        entries.append({
            "language": lang,
            "verb": verb,
            "agents": [np_json(a) for a in window(agents, 5 * i, PER_VERB)],
            "themes": [np_json(t) for t in window(themes[cls], i, PER_VERB)],
        })
    return {"language": lang, "entries": entries}


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "data")
    out.mkdir(parents=True, exist_ok=True)
    for lang in ("fr", "it"):
        path = out / f"lexicon_{lang}.json"
        path.write_text(json.dumps(build(lang), ensure_ascii=False, indent=1) + "\n", encoding="utf-8")
        print(f"wrote {path} ({len(VERBS)} verbs)")


if __name__ == "__main__":
    main()
